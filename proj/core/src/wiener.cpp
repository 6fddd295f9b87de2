#include "scales/wiener.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <boost/random/normal_distribution.hpp>

#include "scales/errors.hpp"
#include "scales/parallel.hpp"
#include "scales/rng.hpp"

namespace scales {

namespace {

constexpr std::uint32_t path_tag = 0x57u;

void require_shape(std::size_t m, std::size_t n_paths) {
  if (m < 2) throw DomainError("need at least 2 steps per path");
  if (n_paths < 1) throw DomainError("need at least one path");
}

// Calls visit(t, B_t) for t = 1..m along path i. Steps 2j+1 and 2j+2 draw
// from the Philox substream (j, path, tag), so every increment is a function
// of (seed, path, step) alone.
template <class Visit>
void walk_path(std::size_t m, std::uint64_t seed, std::size_t i, Visit&& visit) {
  boost::random::normal_distribution<double> normal(0.0, std::sqrt(1.0 / static_cast<double>(m)));
  const auto lo = static_cast<std::uint32_t>(i);
  const auto hi = static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32);
  const std::uint32_t tag = (hi << 8) | path_tag;
  double b = 0.0;
  for (std::size_t t = 0; t < m; t += 2) {
    CounterStream stream(seed, static_cast<std::uint32_t>(t / 2), lo, tag);
    b += normal(stream);
    visit(t + 1, b);
    if (t + 1 < m) {
      b += normal(stream);
      visit(t + 2, b);
    }
  }
}

}  // namespace

PathEnsemble sample_paths(std::size_t m, std::size_t n_paths, std::uint64_t seed,
                          std::size_t memory_cap) {
  require_shape(m, n_paths);
  const double bytes = static_cast<double>(n_paths) * static_cast<double>(m + 1) * sizeof(double);
  if (bytes > static_cast<double>(memory_cap)) {
    throw SizeError("path ensemble exceeds the memory cap; use sample_path_maxima");
  }
  PathEnsemble e{m, n_paths, seed, std::vector<double>(n_paths * (m + 1), 0.0)};
  parallel_for(n_paths, [&](std::size_t i) {
    double* row = e.values.data() + i * (m + 1);
    walk_path(m, seed, i, [row](std::size_t t, double b) { row[t] = b; });
  });
  return e;
}

namespace {

void check_strides(std::size_t m, const std::vector<std::size_t>& strides) {
  if (strides.empty()) throw DomainError("at least one stride is required");
  for (std::size_t s : strides) {
    if (s == 0 || m % s != 0) throw DomainError("strides must divide m");
  }
}

}  // namespace

PathMaxima sample_path_maxima(std::size_t m, std::size_t n_paths, std::uint64_t seed,
                              const std::vector<std::size_t>& strides) {
  require_shape(m, n_paths);
  check_strides(m, strides);
  PathMaxima out{m, n_paths, seed, strides, {}};
  out.max_abs.assign(strides.size(), std::vector<double>(n_paths, 0.0));
  parallel_for(n_paths, [&](std::size_t i) {
    std::vector<double> best(strides.size(), 0.0);
    // Countdown to the next multiple of each stride, cheaper than t % stride.
    std::vector<std::size_t> left(strides);
    walk_path(m, seed, i, [&](std::size_t, double b) {
      const double a = std::abs(b);
      for (std::size_t s = 0; s < strides.size(); ++s) {
        if (--left[s] == 0) {
          left[s] = strides[s];
          best[s] = std::max(best[s], a);
        }
      }
    });
    for (std::size_t s = 0; s < strides.size(); ++s) out.max_abs[s][i] = best[s];
  });
  return out;
}

PathMaxima path_maxima(const PathEnsemble& ensemble, const std::vector<std::size_t>& strides) {
  check_strides(ensemble.m, strides);
  PathMaxima out{ensemble.m, ensemble.n_paths, ensemble.seed, strides, {}};
  out.max_abs.assign(strides.size(), std::vector<double>(ensemble.n_paths, 0.0));
  for (std::size_t i = 0; i < ensemble.n_paths; ++i) {
    const double* row = ensemble.path(i);
    for (std::size_t s = 0; s < strides.size(); ++s) {
      double best = 0.0;
      for (std::size_t t = 0; t <= ensemble.m; t += strides[s]) best = std::max(best, std::abs(row[t]));
      out.max_abs[s][i] = best;
    }
  }
  return out;
}

double smallball_series(double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double c = std::numbers::pi * std::numbers::pi / (8.0 * eps * eps);
  double sum = 0.0;
  for (int j = 0; j < 100000; ++j) {
    const double odd = 2.0 * j + 1.0;
    const double term = (j % 2 == 0 ? 1.0 : -1.0) / odd * std::exp(-odd * odd * c);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) || term == 0.0) break;
  }
  return std::clamp(4.0 / std::numbers::pi * sum, 0.0, 1.0);
}

namespace {

SmallBallEstimate binomial(std::size_t hits, std::size_t n) {
  SmallBallEstimate e;
  e.hits = hits;
  e.n = n;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  e.stderr_ = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  return e;
}

}  // namespace

SmallBallEstimate smallball_mc(const PathEnsemble& ensemble, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  return smallball_mc(path_maxima(ensemble), eps);
}

SmallBallEstimate smallball_mc(const PathMaxima& maxima, double eps, std::size_t stride_index) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (stride_index >= maxima.max_abs.size()) throw IndexError("stride index out of range");
  const auto& mx = maxima.max_abs[stride_index];
  const auto hits = static_cast<std::size_t>(
      std::count_if(mx.begin(), mx.end(), [eps](double v) { return v < eps; }));
  return binomial(hits, mx.size());
}

RefinementAllowance refinement_allowance(const PathMaxima& maxima, double eps,
                                         std::size_t fine_index, std::size_t coarse_index) {
  if (fine_index >= maxima.max_abs.size() || coarse_index >= maxima.max_abs.size()) {
    throw IndexError("stride index out of range");
  }
  const auto& fine = maxima.max_abs[fine_index];
  const auto& coarse = maxima.max_abs[coarse_index];
  std::size_t fine_hits = 0;
  std::size_t coarse_hits = 0;
  std::size_t only_coarse = 0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const bool f = fine[i] < eps;
    const bool c = coarse[i] < eps;
    fine_hits += f;
    coarse_hits += c;
    only_coarse += c && !f;
  }
  const double n = static_cast<double>(fine.size());
  RefinementAllowance r;
  r.fine = static_cast<double>(fine_hits) / n;
  r.coarse = static_cast<double>(coarse_hits) / n;
  // Paired difference of indicators; the coarse max never exceeds the fine max.
  const double d = static_cast<double>(only_coarse) / n;
  r.diff_stderr = std::sqrt(d * (1.0 - d) / n);
  r.allowance = (r.coarse - r.fine) + 3.0 * r.diff_stderr;
  return r;
}

namespace {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("degenerate fit: abscissae coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  return f;
}

}  // namespace

OrderFit smallball_order_fit(std::span<const double> eps, std::span<const double> probs,
                             FitModel model) {
  if (eps.size() != probs.size()) throw DomainError("eps and probs differ in length");
  if (eps.size() < 4) throw DomainError("at least four points are required");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw DomainError("eps must be positive");
    if (!(probs[i] > 0.0 && probs[i] < 1.0)) {
      throw DomainError("degenerate fit: probability outside (0,1)");
    }
    x.push_back(-std::log(eps[i]));
    y.push_back(-std::log(probs[i]));
  }
  OrderFit out;
  out.model = model;
  if (model == FitModel::power_law) {
    std::vector<double> ly;
    for (double v : y) ly.push_back(std::log(v));
    const LinearFit f = least_squares(x, ly);
    out.gamma = f.slope;
    out.kappa_hat = std::exp(f.intercept);
    out.rss = f.rss;
    return out;
  }

  auto profile = [&](double gamma) {
    std::vector<double> u;
    for (double xi : x) u.push_back(std::exp(gamma * xi));
    return least_squares(u, y);
  };
  // Coarse scan, then golden-section refinement around the best cell.
  double best_gamma = 0.25;
  double best_rss = INFINITY;
  for (double g = 0.25; g <= 8.0 + 1e-12; g += 0.01) {
    const double r = profile(g).rss;
    if (r < best_rss) {
      best_rss = r;
      best_gamma = g;
    }
  }
  double a = std::max(0.2, best_gamma - 0.01);
  double b = best_gamma + 0.01;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = profile(c).rss;
  double fd = profile(d).rss;
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = profile(c).rss;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = profile(d).rss;
    }
  }
  out.gamma = 0.5 * (a + b);
  const LinearFit f = profile(out.gamma);
  out.kappa_hat = f.slope;
  out.offset = f.intercept;
  out.rss = f.rss;
  return out;
}

FiniteMetricSpace sup_distance_space(const PathEnsemble& ensemble) {
  std::vector<std::vector<double>> points(ensemble.n_paths);
  for (std::size_t i = 0; i < ensemble.n_paths; ++i) {
    points[i].assign(ensemble.path(i), ensemble.path(i) + ensemble.m + 1);
  }
  return FiniteMetricSpace::from_points(points, Norm::sup);
}

PathQuantizationTrend path_quantization_trend(const PathEnsemble& ensemble,
                                              std::span<const double> eps_list,
                                              const QuantizerOptions& options) {
  if (ensemble.n_paths > 4096) throw SizeError("path quantization is limited to 4096 paths");
  if (eps_list.empty()) throw DomainError("empty eps list");
  auto space = std::make_shared<const FiniteMetricSpace>(sup_distance_space(ensemble));
  const EmpiricalMeasure mu = EmpiricalMeasure::uniform(space);
  PathQuantizationTrend out;
  for (double e : eps_list) {
    const QuantizationCount q = quantization_number(mu, e, options);
    out.eps.push_back(e);
    out.count.push_back(static_cast<double>(q.n));
    out.exact.push_back(q.exact);
    out.scaled_log.push_back(e * e * std::log(static_cast<double>(q.n)));
  }
  // Order the checks by decreasing eps regardless of the input order.
  std::vector<std::size_t> order(out.eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return out.eps[a] > out.eps[b]; });
  out.nonincreasing = true;
  out.scaled_increasing = true;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const std::size_t big = order[k - 1];
    const std::size_t small = order[k];
    out.nonincreasing = out.nonincreasing && out.count[big] <= out.count[small];
    out.scaled_increasing = out.scaled_increasing && out.scaled_log[small] > out.scaled_log[big];
  }
  return out;
}

namespace {

void write_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("truncated ensemble file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | bytes[i];
  return v;
}

}  // namespace

void save_ensemble(const PathEnsemble& ensemble, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_u64(out, ensemble.m);
  write_u64(out, ensemble.n_paths);
  write_u64(out, ensemble.seed);
  for (double v : ensemble.values) write_u64(out, std::bit_cast<std::uint64_t>(v));
  std::ofstream sidecar(path + ".json");
  if (!sidecar) throw IoError("cannot write " + path + ".json");
  sidecar << "{\"format\": \"f64le\", \"m\": " << ensemble.m << ", \"n_paths\": " << ensemble.n_paths
          << ", \"seed\": " << ensemble.seed << "}\n";
}

PathEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  PathEnsemble e;
  e.m = read_u64(in);
  e.n_paths = read_u64(in);
  e.seed = read_u64(in);
  require_shape(e.m, e.n_paths);
  e.values.resize(e.n_paths * (e.m + 1));
  for (double& v : e.values) v = std::bit_cast<double>(read_u64(in));
  return e;
}

}  // namespace scales
