#include "scales/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scales/errors.hpp"

namespace scales {

namespace {

void require_decreasing_unit_grid(std::span<const double> eps, const char* what) {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) {
      throw DomainError(std::string(what) + ": grid values must lie in (0,1)");
    }
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw DomainError(std::string(what) + ": grid must be strictly decreasing");
    }
  }
}

// alpha >= 0 is allowed here; bisection probes the bracket end alpha = 0.
double log_scl_unchecked(const ScalingFamily& family, double alpha, double log_inv_eps) {
  double x = log_inv_eps;
  for (int i = 1; i < family.q(); ++i) x = x > 1.0 ? std::log(x) : 0.0;
  double y = alpha * x;
  for (int i = 1; i < family.p(); ++i) y = std::exp(y);
  return -y;
}

enum class Trend { diverging, vanishing, inconclusive };

Trend classify(std::span<const double> eps, std::span<const double> log_f,
               const ScalingFamily& family, double alpha, std::size_t window) {
  const std::size_t n = eps.size();
  const std::size_t first = n - window;
  bool increasing = true;
  bool decreasing = true;
  double prev = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double v = log_f[i] + log_scl_unchecked(family, alpha, -std::log(eps[i]));
    if (i > first) {
      if (!(v > prev)) increasing = false;
      if (!(v < prev)) decreasing = false;
    }
    prev = v;
  }
  if (increasing && prev > 0.0) return Trend::diverging;
  if (decreasing && prev < 0.0) return Trend::vanishing;
  return Trend::inconclusive;
}

}  // namespace

ScalingFamily::ScalingFamily(int p, int q) : p_(p), q_(q) {
  if (p < 1 || q < 1) throw DomainError("scaling family needs p >= 1 and q >= 1");
}

double log_scaling_from_log_inv(const ScalingFamily& family, double alpha,
                                double log_inv_eps) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(log_inv_eps > 0.0)) throw DomainError("eps must lie in (0,1)");
  return log_scl_unchecked(family, alpha, log_inv_eps);
}

double log_scaling(const ScalingFamily& family, double alpha, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
  return log_scaling_from_log_inv(family, alpha, -std::log(eps));
}

double eval_scaling(const ScalingFamily& family, double alpha, double eps) {
  return std::exp(log_scaling(family, alpha, eps));
}

double log_gauge(const ScalingFamily& family, double alpha, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  return log_scl_unchecked(family, alpha, -std::log(r));
}

ScalingConditionReport check_scaling_condition(const ScalingFamily& family, double alpha,
                                               double beta, double lambda,
                                               std::span<const double> eps_grid,
                                               std::size_t window, double threshold) {
  if (!(beta > 0.0) || !(alpha > beta)) throw DomainError("need alpha > beta > 0");
  if (!(lambda > 1.0)) throw DomainError("need lambda > 1");
  if (!(threshold > 0.0)) throw DomainError("threshold must be positive");
  require_decreasing_unit_grid(eps_grid, "check_scaling_condition");
  if (window < 2 || window > eps_grid.size()) {
    throw DomainError("tail window must be in [2, grid length]");
  }

  ScalingConditionReport report;
  report.window = window;
  report.threshold = threshold;
  report.eps.assign(eps_grid.begin(), eps_grid.end());
  for (double e : eps_grid) {
    const double L = -std::log(e);
    const double a = log_scl_unchecked(family, alpha, L);
    report.log_ratio_lambda_power.push_back(a - log_scl_unchecked(family, beta, lambda * L));
    report.log_ratio_power.push_back(a - lambda * log_scl_unchecked(family, beta, L));
  }

  const double log_threshold = std::log(threshold);
  auto tail_ok = [&](const std::vector<double>& v) {
    const std::size_t first = v.size() - window;
    for (std::size_t i = first + 1; i < v.size(); ++i) {
      if (!(v[i] < v[i - 1])) return false;
    }
    return v.back() < log_threshold;
  };
  report.lambda_power_ok = tail_ok(report.log_ratio_lambda_power);
  report.power_ok = tail_ok(report.log_ratio_power);
  report.holds = report.lambda_power_ok && report.power_ok;
  return report;
}

ScaleEstimate threshold_alpha(std::span<const double> eps, std::span<const double> log_f,
                              const ScalingFamily& family, TrendMode mode,
                              const ThresholdOptions& options) {
  require_decreasing_unit_grid(eps, "threshold_alpha");
  if (eps.size() != log_f.size()) throw DomainError("grid and values differ in length");
  const std::size_t window = options.tail_window;
  if (window < 2 || window > eps.size()) {
    throw DomainError("tail window must be in [2, grid length]");
  }
  double lo = options.lo;
  double hi = options.hi;
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("alpha bracket must satisfy 0 <= lo < hi");

  Trend at_lo = classify(eps, log_f, family, lo, window);
  Trend at_hi = classify(eps, log_f, family, hi, window);
  for (int w = 0; w < options.max_widenings; ++w) {
    if (at_hi == Trend::diverging) {
      lo = hi;
      at_lo = at_hi;
      hi *= 2.0;
      at_hi = classify(eps, log_f, family, hi, window);
    } else if (at_lo == Trend::vanishing && lo > 0.0) {
      hi = lo;
      at_hi = at_lo;
      lo /= 2.0;
      at_lo = classify(eps, log_f, family, lo, window);
    } else {
      break;
    }
  }
  if (at_lo == at_hi || at_hi == Trend::diverging || at_lo == Trend::vanishing) {
    throw BracketError("tail trend does not change across the alpha bracket");
  }

  ScaleEstimate est;
  est.method = mode == TrendMode::lower ? "threshold-lower" : "threshold-upper";
  est.window = window;
  est.eps.assign(eps.begin(), eps.end());
  est.extra["bracket_lo"] = lo;
  est.extra["bracket_hi"] = hi;
  for (int it = 0; it < options.iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Trend t = classify(eps, log_f, family, mid, window);
    if (t == Trend::diverging) {
      lo = mid;
    } else if (t == Trend::vanishing) {
      hi = mid;
    } else {
      ++est.inconclusive_probes;
      if (mode == TrendMode::lower) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }
  est.lower = est.upper = 0.5 * (lo + hi);
  est.resolution = hi - lo;
  return est;
}

bool iterated_log_from_log(double log_x, int times, double& out) {
  double v = log_x;
  for (int t = 0; t < times; ++t) {
    if (!(v > 0.0)) return false;
    v = std::log(v);
  }
  out = v;
  return !std::isnan(v);
}

const char* to_string(RatioForm form) {
  switch (form) {
    case RatioForm::origin:
      return "origin";
    case RatioForm::anchored:
      return "anchored";
    case RatioForm::regression:
      return "regression";
  }
  return "?";
}

ScaleEstimate ratio_estimate(std::span<const double> eps, std::span<const double> log_counts,
                             int p, int q, std::size_t tail_window,
                             const RatioOptions& options) {
  if (p < 1 || q < 1) throw DomainError("p and q must be at least 1");
  if (eps.empty() || eps.size() != log_counts.size()) {
    throw DomainError("ratio_estimate needs equally sized, non-empty inputs");
  }
  require_decreasing_unit_grid(eps, "ratio_estimate");

  ScaleEstimate est;
  est.method = std::string(to_string(options.form)) + "-ratio";

  auto numerator = [&](double log_count, double& g) {
    if (p == 1) {
      g = log_count;
      return log_count >= 0.0 && std::isfinite(log_count);
    }
    if (!(log_count > 0.0)) return false;
    return iterated_log_from_log(log_count, p - 1, g);
  };
  auto denominator = [&](double e) {
    double h = 0.0;
    if (!iterated_log_from_log(-std::log(e), q - 1, h) || !(h > 0.0)) {
      throw DomainError("log composition of 1/eps is not positive");
    }
    return h;
  };
  auto degenerate = [&](const char* why) {
    if (options.degenerate == DegeneratePolicy::raise) throw DomainError(why);
    est.degenerate = true;
    return 0.0;
  };

  const std::size_t k = eps.size();
  std::vector<double> g(k, 0.0);
  std::vector<double> h(k, 0.0);
  std::vector<char> ok(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    h[i] = denominator(eps[i]);
    ok[i] = numerator(log_counts[i], g[i]);
  }

  const std::size_t first = options.form == RatioForm::origin ? 0 : 1;
  if (first == 1 && k < 2) throw DomainError("anchored and regression forms need two grid points");
  // Running sums for the prefix regression.
  double sh = 0.0, sg = 0.0, shh = 0.0, shg = 0.0;
  bool prefix_ok = true;
  const char* undefined = "count must exceed 1 for the log composition";
  for (std::size_t i = 0; i < k; ++i) {
    prefix_ok = prefix_ok && ok[i];
    sh += h[i];
    sg += g[i];
    shh += h[i] * h[i];
    shg += h[i] * g[i];
    if (i < first) continue;
    double rho = 0.0;
    switch (options.form) {
      case RatioForm::origin:
        rho = ok[i] ? g[i] / h[i] : degenerate(undefined);
        break;
      case RatioForm::anchored:
        rho = ok[i] && ok[0] ? (g[i] - g[0]) / (h[i] - h[0]) : degenerate(undefined);
        break;
      case RatioForm::regression: {
        const double m = static_cast<double>(i + 1);
        const double sxx = shh - sh * sh / m;
        rho = prefix_ok ? (shg - sh * sg / m) / sxx : degenerate(undefined);
        break;
      }
    }
    est.eps.push_back(eps[i]);
    est.sequence.push_back(rho);
  }

  const std::size_t n = est.sequence.size();
  if (tail_window < 1 || tail_window > n) {
    throw DomainError("tail window must be in [1, sequence length]");
  }
  est.window = tail_window;
  const auto tail = std::span<const double>(est.sequence).subspan(n - tail_window);
  const auto [mn, mx] = std::minmax_element(tail.begin(), tail.end());
  est.lower = *mn;
  est.upper = *mx;
  return est;
}

}  // namespace scales
