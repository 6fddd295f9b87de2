#include "scales/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scales/covering.hpp"
#include "scales/errors.hpp"
#include "scales/parallel.hpp"
#include "scales/rng.hpp"

namespace scales {

EmpiricalMeasure::EmpiricalMeasure(std::shared_ptr<const FiniteMetricSpace> space,
                                   std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw DomainError("measure needs a space");
  if (weights_.size() != space_->size()) throw DomainError("one weight per point is required");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw DomainError("weights must be finite and non-negative");
    }
    total_ += weights_[i];
    if (weights_[i] > 0.0) support_.push_back(i);
  }
  if (!(total_ > 0.0)) throw DomainError("total mass must be positive");
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::shared_ptr<const FiniteMetricSpace> space) {
  const std::size_t n = space->size();
  return EmpiricalMeasure(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

EmpiricalMeasure EmpiricalMeasure::dirac(std::shared_ptr<const FiniteMetricSpace> space,
                                         std::size_t at) {
  if (at >= space->size()) throw IndexError("dirac point out of range");
  std::vector<double> w(space->size(), 0.0);
  w[at] = 1.0;
  return EmpiricalMeasure(std::move(space), std::move(w));
}

double local_mass(const EmpiricalMeasure& mu, std::size_t x, double eps) {
  if (x >= mu.space().size()) throw IndexError("point index out of range");
  const double* row = mu.space().row(x);
  double mass = 0.0;
  for (std::size_t j : mu.support()) {
    if (row[j] < eps) mass += mu.weights()[j];
  }
  return mass;
}

ScaleEstimate local_scale(const EmpiricalMeasure& mu, std::size_t x, const ScalingFamily& family,
                          std::span<const double> eps_grid, const LocalScaleOptions& options) {
  if (x >= mu.space().size()) throw IndexError("point index out of range");
  if (eps_grid.empty()) throw DomainError("empty eps grid");
  std::vector<double> log_counts;
  log_counts.reserve(eps_grid.size());
  for (double e : eps_grid) {
    const double m = local_mass(mu, x, e);
    log_counts.push_back(m > 0.0 ? std::log(mu.total_mass() / m) : INFINITY);
  }
  if (log_counts.back() == INFINITY) {
    ScaleEstimate est;
    est.method = "degenerate";
    est.lower = est.upper = options.threshold.hi;
    est.degenerate = true;
    est.eps.assign(eps_grid.begin(), eps_grid.end());
    est.window = options.tail_window;
    return est;
  }
  // A ball holding all of the mass has count 1; its ratio is 0 by convention.
  for (double& c : log_counts) c = std::max(c, 0.0);

  RatioOptions ratio;
  ratio.form = options.form;
  ratio.degenerate = DegeneratePolicy::zero;
  ScaleEstimate est =
      ratio_estimate(eps_grid, log_counts, family.p(), family.q(), options.tail_window, ratio);
  est.degenerate = false;

  if (options.cross_check && options.tail_window >= 2) {
    ThresholdOptions t = options.threshold;
    t.tail_window = options.tail_window;
    try {
      est.extra["threshold_lower"] =
          threshold_alpha(eps_grid, log_counts, family, TrendMode::lower, t).lower;
      est.extra["threshold_upper"] =
          threshold_alpha(eps_grid, log_counts, family, TrendMode::upper, t).upper;
    } catch (const BracketError&) {
      est.extra["threshold_bracket_error"] = 1.0;
    }
  }
  return est;
}

double quantization_cost(const EmpiricalMeasure& mu, const std::vector<std::size_t>& centers) {
  if (centers.empty()) throw DomainError("at least one centre is required");
  const auto& space = mu.space();
  for (std::size_t c : centers) {
    if (c >= space.size()) throw IndexError("centre index out of range");
  }
  double cost = 0.0;
  for (std::size_t x : mu.support()) {
    const double* row = space.row(x);
    double best = INFINITY;
    for (std::size_t c : centers) best = std::min(best, row[c]);
    cost += mu.weights()[x] * best;
  }
  return cost;
}

namespace {

// Support-restricted view: local index a stands for space point idx[a].
struct View {
  const FiniteMetricSpace& space;
  const std::vector<std::size_t>& idx;
  std::vector<double> w;

  std::size_t size() const { return idx.size(); }
  double d(std::size_t a, std::size_t b) const { return space(idx[a], idx[b]); }
};

View make_view(const EmpiricalMeasure& mu) {
  View v{mu.space(), mu.support(), {}};
  for (std::size_t i : mu.support()) v.w.push_back(mu.weights()[i]);
  return v;
}

double view_cost(const View& v, const std::vector<std::size_t>& centers) {
  double cost = 0.0;
  for (std::size_t x = 0; x < v.size(); ++x) {
    const double* row = v.space.row(v.idx[x]);
    double best = INFINITY;
    for (std::size_t c : centers) best = std::min(best, row[v.idx[c]]);
    cost += v.w[x] * best;
  }
  return cost;
}

double binomial_capped(std::size_t s, std::size_t n, double cap) {
  n = std::min(n, s - n);
  double c = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    c = c * static_cast<double>(s - n + i) / static_cast<double>(i);
    if (c > cap) return c;
  }
  return c;
}

bool within(double cost, double target) { return cost <= target * (1.0 + 1e-12) + 1e-15; }

struct Solution {
  std::vector<std::size_t> centers;  // local indices
  double cost = INFINITY;
};

Solution exhaustive(const View& v, std::size_t n, std::optional<double> target) {
  const std::size_t s = v.size();
  std::vector<std::vector<double>> nearest(n + 1, std::vector<double>(s, INFINITY));
  std::vector<std::size_t> current(n);
  Solution best;
  bool stop = false;

  auto rec = [&](auto&& self, std::size_t level, std::size_t start) -> void {
    for (std::size_t c = start; c + (n - level) <= s && !stop; ++c) {
      const double* row = v.space.row(v.idx[c]);
      const auto& prev = nearest[level];
      auto& next = nearest[level + 1];
      for (std::size_t x = 0; x < s; ++x) next[x] = std::min(prev[x], row[v.idx[x]]);
      current[level] = c;
      if (level + 1 == n) {
        double cost = 0.0;
        for (std::size_t x = 0; x < s; ++x) cost += v.w[x] * next[x];
        if (cost < best.cost) {
          best.cost = cost;
          best.centers = current;
        }
        if (target && within(cost, *target)) stop = true;
      } else {
        self(self, level + 1, c + 1);
      }
    }
  };
  rec(rec, 0, 0);
  return best;
}

void assign(const View& v, const std::vector<std::size_t>& centers, std::vector<std::size_t>& cell,
            std::vector<double>& dist) {
  const std::size_t s = v.size();
  cell.assign(s, 0);
  dist.assign(s, INFINITY);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double* row = v.space.row(v.idx[centers[k]]);
    for (std::size_t x = 0; x < s; ++x) {
      const double d = row[v.idx[x]];
      if (d < dist[x]) {
        dist[x] = d;
        cell[x] = k;
      }
    }
  }
}

std::vector<std::size_t> farthest_first(const View& v, std::size_t n) {
  const std::size_t s = v.size();
  std::vector<std::size_t> centers{0};
  std::vector<char> chosen(s, 0);
  chosen[0] = 1;
  std::vector<double> nd(s);
  for (std::size_t x = 0; x < s; ++x) nd[x] = v.d(0, x);
  while (centers.size() < n) {
    std::size_t pick = s;
    double far = -1.0;
    for (std::size_t x = 0; x < s; ++x) {
      if (!chosen[x] && nd[x] > far) {
        far = nd[x];
        pick = x;
      }
    }
    centers.push_back(pick);
    chosen[pick] = 1;
    const double* row = v.space.row(v.idx[pick]);
    for (std::size_t x = 0; x < s; ++x) nd[x] = std::min(nd[x], row[v.idx[x]]);
  }
  return centers;
}

std::vector<std::size_t> d_sampling(const View& v, std::size_t n, std::uint64_t seed,
                                    std::uint32_t restart) {
  const std::size_t s = v.size();
  CounterStream rng(seed, restart, 0x9d5u);
  std::vector<char> chosen(s, 0);
  std::vector<double> nd(s, 1.0);
  std::vector<std::size_t> centers;
  while (centers.size() < n) {
    double total = 0.0;
    for (std::size_t x = 0; x < s; ++x) total += chosen[x] ? 0.0 : v.w[x] * nd[x];
    std::size_t pick = s;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t x = 0; x < s; ++x) {
        if (chosen[x]) continue;
        acc += v.w[x] * nd[x];
        pick = x;
        if (acc > u && v.w[x] * nd[x] > 0.0) break;
      }
    } else {
      for (pick = 0; chosen[pick]; ++pick) {
      }
    }
    centers.push_back(pick);
    chosen[pick] = 1;
    const double* row = v.space.row(v.idx[pick]);
    for (std::size_t x = 0; x < s; ++x) {
      nd[x] = centers.size() == 1 ? row[v.idx[x]] : std::min(nd[x], row[v.idx[x]]);
    }
  }
  return centers;
}

constexpr std::size_t medoid_candidates = 256;

// Alternate between assignment and per-cell medoid updates.
void cell_medoids(const View& v, std::vector<std::size_t>& centers) {
  const std::size_t s = v.size();
  std::vector<std::size_t> cell;
  std::vector<double> dist;
  std::vector<std::vector<std::size_t>> members(centers.size());
  std::vector<std::vector<std::size_t>> previous(centers.size());
  for (int iter = 0; iter < 100; ++iter) {
    assign(v, centers, cell, dist);
    members.swap(previous);
    for (auto& m : members) m.clear();
    for (std::size_t x = 0; x < s; ++x) members[cell[x]].push_back(x);
    bool improved = false;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const auto& m = members[k];
      // An unchanged cell already holds its (sampled) medoid.
      if (iter > 0 && m == previous[k]) continue;
      auto cell_cost = [&](std::size_t c) {
        const double* row = v.space.row(v.idx[c]);
        double acc = 0.0;
        for (std::size_t x : m) acc += v.w[x] * row[v.idx[x]];
        return acc;
      };
      double best = cell_cost(centers[k]);
      std::size_t best_c = centers[k];
      // Large cells are scanned at an even stride to keep a pass near-linear.
      const std::size_t step = std::max<std::size_t>(1, m.size() / medoid_candidates);
      for (std::size_t i = 0; i < m.size(); i += step) {
        const std::size_t c = m[i];
        if (c == centers[k]) continue;
        const double cost = cell_cost(c);
        if (cost < best - 1e-12 * std::abs(best)) {
          best = cost;
          best_c = c;
        }
      }
      if (best_c != centers[k]) {
        centers[k] = best_c;
        improved = true;
      }
    }
    if (!improved) break;
  }
}

// First-improvement one-for-one swaps, scanning centres and candidates in
// increasing index order.
void full_swaps(const View& v, std::vector<std::size_t>& centers) {
  const std::size_t s = v.size();
  std::vector<double> d1(s);
  std::vector<double> d2(s);
  std::vector<std::size_t> c1(s);
  std::vector<char> is_center(s, 0);
  for (int pass = 0; pass < 1000; ++pass) {
    std::sort(centers.begin(), centers.end());
    std::fill(is_center.begin(), is_center.end(), 0);
    for (std::size_t c : centers) is_center[c] = 1;
    double cost = 0.0;
    for (std::size_t x = 0; x < s; ++x) {
      d1[x] = d2[x] = INFINITY;
      for (std::size_t k = 0; k < centers.size(); ++k) {
        const double d = v.d(centers[k], x);
        if (d < d1[x]) {
          d2[x] = d1[x];
          d1[x] = d;
          c1[x] = k;
        } else if (d < d2[x]) {
          d2[x] = d;
        }
      }
      cost += v.w[x] * d1[x];
    }
    bool swapped = false;
    for (std::size_t k = 0; k < centers.size() && !swapped; ++k) {
      for (std::size_t j = 0; j < s && !swapped; ++j) {
        if (is_center[j]) continue;
        const double* row = v.space.row(v.idx[j]);
        double trial = 0.0;
        for (std::size_t x = 0; x < s; ++x) {
          const double keep = c1[x] == k ? d2[x] : d1[x];
          trial += v.w[x] * std::min(keep, row[v.idx[x]]);
        }
        if (trial < cost - 1e-12 * std::abs(cost)) {
          centers[k] = j;
          swapped = true;
        }
      }
    }
    if (!swapped) break;
  }
}

Solution run_restart(const View& v, std::size_t n, int restart, const QuantizerOptions& options) {
  Solution sol;
  sol.centers = restart == 0 ? farthest_first(v, n)
                             : d_sampling(v, n, options.seed, static_cast<std::uint32_t>(restart));
  cell_medoids(v, sol.centers);
  if (v.size() <= options.full_swap_limit) full_swaps(v, sol.centers);
  std::sort(sol.centers.begin(), sol.centers.end());
  sol.cost = view_cost(v, sol.centers);
  return sol;
}

QuantizerResult to_result(const View& v, const Solution& sol, std::size_t n, bool exact,
                          int restart) {
  QuantizerResult r;
  for (std::size_t c : sol.centers) r.centers.push_back(v.idx[c]);
  r.cost = sol.cost;
  r.n_requested = n;
  r.exact = exact;
  r.restart = restart;
  return r;
}

}  // namespace

QuantizerResult best_n_median(const EmpiricalMeasure& mu, std::size_t n,
                              const QuantizerOptions& options) {
  const View v = make_view(mu);
  const std::size_t s = v.size();
  if (n < 1 || n > s) throw DomainError("n must lie in [1, |supp mu|]");
  if (options.restarts < 1) throw DomainError("at least one restart is required");
  if (n == s) {
    Solution all;
    all.centers.resize(s);
    std::iota(all.centers.begin(), all.centers.end(), 0);
    all.cost = view_cost(v, all.centers);
    return to_result(v, all, n, true, -1);
  }
  if (binomial_capped(s, n, options.exhaustive_limit) <= options.exhaustive_limit) {
    return to_result(v, exhaustive(v, n, options.target_cost), n, true, -1);
  }

  // One assignment plus one medoid pass.
  const double per_restart =
      static_cast<double>(s) *
      static_cast<double>(n + std::min(s / n, medoid_candidates));
  const auto restarts = static_cast<std::size_t>(
      std::clamp(std::floor(options.work_limit / per_restart), 1.0, static_cast<double>(options.restarts)));
  std::vector<Solution> sols(restarts);
  const std::size_t chunk = options.target_cost ? std::max(1u, thread_count()) : restarts;
  for (std::size_t begin = 0; begin < restarts; begin += chunk) {
    const std::size_t end = std::min(restarts, begin + chunk);
    parallel_for(end - begin, [&](std::size_t i) {
      sols[begin + i] = run_restart(v, n, static_cast<int>(begin + i), options);
    });
    if (options.target_cost) {
      for (std::size_t r = begin; r < end; ++r) {
        if (within(sols[r].cost, *options.target_cost)) {
          return to_result(v, sols[r], n, false, static_cast<int>(r));
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (sols[r].cost < sols[best].cost) best = r;
  }
  return to_result(v, sols[best], n, false, static_cast<int>(best));
}

QuantizationCount quantization_number(const EmpiricalMeasure& mu, double eps,
                                      const QuantizerOptions& options) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const std::size_t s = mu.support().size();

  QuantizationCount out;
  out.exact = true;
  // A greedy eps-cover of the support has cost < eps * total mass, which
  // certifies an upper end for the search when the mass is at most 1.
  std::size_t hi = s;
  double hi_cost = 0.0;
  if (mu.total_mass() <= 1.0 + 1e-12) {
    const FiniteMetricSpace sub = mu.space().subspace(mu.support());
    const BallCover cover = greedy_cover(sub, eps);
    std::vector<std::size_t> centers;
    for (std::size_t c : cover.centers) centers.push_back(mu.support()[c]);
    hi = centers.size();
    hi_cost = quantization_cost(mu, centers);
  }

  auto feasible = [&](std::size_t n, double& cost) {
    QuantizerOptions o = options;
    o.target_cost = eps;
    const QuantizerResult r = best_n_median(mu, n, o);
    if (!r.exact) out.exact = false;
    cost = r.cost;
    return within(r.cost, eps);
  };

  double cost = 0.0;
  std::size_t bad = 0;
  std::size_t good = hi;
  double good_cost = hi_cost;
  for (std::size_t n = 1; n < hi; n *= 2) {
    if (feasible(n, cost)) {
      good = n;
      good_cost = cost;
      break;
    }
    bad = n;
  }
  while (good - bad > 1) {
    const std::size_t mid = bad + (good - bad) / 2;
    if (feasible(mid, cost)) {
      good = mid;
      good_cost = cost;
    } else {
      bad = mid;
    }
  }
  out.n = good;
  out.cost = good_cost;
  return out;
}

MassEscape mass_escape_check(const EmpiricalMeasure& mu, const QuantizerResult& quantizer,
                             double r) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (quantizer.centers.empty()) throw DomainError("quantizer has no centres");
  MassEscape out;
  for (std::size_t x : mu.support()) {
    const double* row = mu.space().row(x);
    bool inside = false;
    for (std::size_t c : quantizer.centers) inside = inside || row[c] < r;
    if (!inside) out.escaped_mass += mu.weights()[x];
  }
  out.bound = quantizer.cost / r;
  out.ok = out.escaped_mass <= out.bound + 1e-12;
  return out;
}

double weighted_percentile(std::vector<std::pair<double, double>> value_weight, double pct) {
  if (value_weight.empty()) throw DomainError("percentile of an empty set");
  std::stable_sort(value_weight.begin(), value_weight.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double total = 0.0;
  for (const auto& [v, w] : value_weight) total += w;
  double acc = 0.0;
  for (const auto& [v, w] : value_weight) {
    acc += w;
    if (acc >= pct * total * (1.0 - 1e-12)) return v;
  }
  return value_weight.back().first;
}

namespace {

ScaleEstimate point_estimate(double value, const std::string& method) {
  ScaleEstimate e;
  e.lower = e.upper = value;
  e.method = method;
  return e;
}

ScaleEstimate interval(double a, double b, const std::string& method) {
  ScaleEstimate e;
  e.lower = std::min(a, b);
  e.upper = std::max(a, b);
  e.method = method;
  return e;
}

}  // namespace

MeasureScaleReport measure_scale_report(const EmpiricalMeasure& mu, const ScalingFamily& family,
                                        std::span<const double> eps_grid,
                                        const MeasureReportConfig& config) {
  if (eps_grid.empty()) throw DomainError("empty eps grid");
  MeasureScaleReport report;
  report.eps.assign(eps_grid.begin(), eps_grid.end());
  const auto& supp = mu.support();

  auto isolated = [&](const std::string& stage, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      report.errors[stage] = e.what();
    }
  };

  isolated("local", [&] {
    LocalScaleOptions local;
    local.tail_window = config.tail_window;
    local.form = config.form;
    local.threshold = config.threshold;
    local.cross_check = false;
    report.points.resize(supp.size());
    parallel_for(supp.size(), [&](std::size_t i) {
      const ScaleEstimate e = local_scale(mu, supp[i], family, eps_grid, local);
      report.points[i] = {supp[i], mu.weights()[supp[i]], e.lower, e.upper, e.degenerate};
    });
    std::vector<std::pair<double, double>> lowers;
    std::vector<std::pair<double, double>> uppers;
    bool degenerate = false;
    for (const auto& p : report.points) {
      lowers.emplace_back(p.lower, p.weight);
      uppers.emplace_back(p.upper, p.weight);
      degenerate = degenerate || p.degenerate;
    }
    auto percentile_estimate = [&](const auto& values, double pct) {
      ScaleEstimate e = point_estimate(weighted_percentile(values, pct), "weighted-percentile");
      e.extra["percentile"] = pct;
      e.degenerate = degenerate;
      return e;
    };
    report.quantities[quantity::hausdorff] = percentile_estimate(lowers, config.low_percentile);
    report.quantities[quantity::hausdorff_star] = percentile_estimate(lowers, config.high_percentile);
    report.quantities[quantity::packing] = percentile_estimate(uppers, config.low_percentile);
    report.quantities[quantity::packing_star] = percentile_estimate(uppers, config.high_percentile);
  });

  RatioOptions ratio;
  ratio.form = config.form;
  ratio.degenerate = DegeneratePolicy::zero;
  auto logs = [](const std::vector<double>& counts) {
    std::vector<double> out;
    for (double c : counts) out.push_back(std::log(c));
    return out;
  };

  isolated("box", [&] {
    const std::size_t n = eps_grid.size();
    const FiniteMetricSpace sub = mu.space().subspace(supp);
    report.cover_exact = sub.size() <= exact_search_limit;
    report.cover_lower.resize(n);
    report.cover_upper.resize(n);
    parallel_for(n, [&](std::size_t i) {
      if (report.cover_exact) {
        report.cover_lower[i] = report.cover_upper[i] =
            static_cast<double>(covering_number_exact(sub, eps_grid[i]));
      } else {
        // A maximal eps-separated set is an eps-net, and any 2eps-separated set
        // injects into an eps-cover.
        report.cover_lower[i] = static_cast<double>(packing_number_greedy(sub, 2.0 * eps_grid[i]));
        report.cover_upper[i] = static_cast<double>(packing_number_greedy(sub, eps_grid[i]));
      }
    });
    const ScaleEstimate box_lo = ratio_estimate(eps_grid, logs(report.cover_lower), family.p(),
                                                family.q(), config.tail_window, ratio);
    const ScaleEstimate box_hi = ratio_estimate(eps_grid, logs(report.cover_upper), family.p(),
                                                family.q(), config.tail_window, ratio);
    const std::string box_method = report.cover_exact ? "exact-cover" : "packing-bracket";
    ScaleEstimate bl = interval(box_lo.lower, box_hi.lower, box_method);
    ScaleEstimate bu = interval(box_lo.upper, box_hi.upper, box_method);
    bl.eps = bu.eps = box_hi.eps;
    bl.sequence = box_lo.sequence;
    bu.sequence = box_hi.sequence;
    bl.window = bu.window = config.tail_window;
    report.quantities[quantity::box_lower] = bl;
    report.quantities[quantity::box_upper] = bu;
    report.quantities[quantity::box_lower_star] = bl;
    report.quantities[quantity::box_upper_star] = bu;
  });

  if (config.quantization) {
    isolated("quantization", [&] {
      report.quantization_exact = true;
      for (double e : eps_grid) {
        const QuantizationCount q = quantization_number(mu, e, config.quantizer);
        report.quantization.push_back(static_cast<double>(q.n));
        report.quantization_exact = report.quantization_exact && q.exact;
      }
      const ScaleEstimate qr = ratio_estimate(eps_grid, logs(report.quantization), family.p(),
                                              family.q(), config.tail_window, ratio);
      ScaleEstimate ql = point_estimate(qr.lower, qr.method);
      ScaleEstimate qu = point_estimate(qr.upper, qr.method);
      for (ScaleEstimate* q : {&ql, &qu}) {
        q->eps = qr.eps;
        q->sequence = qr.sequence;
        q->window = qr.window;
        q->heuristic_upper_bound = !report.quantization_exact;
      }
      report.quantities[quantity::quant_lower] = ql;
      report.quantities[quantity::quant_upper] = qu;
    });
  }

  report.arrows = grade_quantities(report.quantities, {}, 0.0);
  return report;
}

}  // namespace scales
