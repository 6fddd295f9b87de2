#include "scales/functional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "scales/errors.hpp"
#include "scales/rng.hpp"

namespace scales {

namespace {

std::size_t grid_intervals(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw DomainError("grid step must lie in (0, 1]");
  const double m = std::round(1.0 / grid_step);
  if (std::abs(m * grid_step - 1.0) > 1e-9) throw DomainError("1/grid_step must be an integer");
  return static_cast<std::size_t>(m);
}

void require_supported(const FunctionClassSpec& spec) {
  if (spec.d != 1) throw DomainError("only d = 1 is supported");
  if (spec.k < 0 || !(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw DomainError("need k >= 0 and alpha in [0, 1]");
  }
  if (!(spec.q() > 0.0)) throw DomainError("q = k + alpha must be positive");
}

}  // namespace

double bump(double q, double t) {
  if (!(t > 0.0 && t < 1.0)) return 0.0;
  return std::pow(2.0 * t, q) * std::pow(2.0 - 2.0 * t, q);
}

GridFunction sample_grid(double grid_step, const std::function<double(double)>& f) {
  const std::size_t m = grid_intervals(grid_step);
  GridFunction g{grid_step, std::vector<double>(m + 1)};
  for (std::size_t i = 0; i <= m; ++i) g.values[i] = f(static_cast<double>(i) * grid_step);
  return g;
}

double holder_seminorm(const GridFunction& f, int k, double alpha) {
  if (k < 0 || !(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("need k >= 0, alpha in [0,1]");
  if (f.values.size() < static_cast<std::size_t>(k) + 2) {
    throw DomainError("grid too coarse for the requested difference order");
  }
  const double h = f.grid_step;
  std::vector<double> d = f.values;
  for (int order = 0; order < k; ++order) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = (d[i + 1] - d[i]) / h;
    d.pop_back();
  }
  double best = 0.0;
  if (alpha == 1.0) {
    // For a Lipschitz bound adjacent pairs dominate all others.
    for (std::size_t i = 0; i + 1 < d.size(); ++i) best = std::max(best, std::abs(d[i + 1] - d[i]) / h);
  } else if (alpha == 0.0) {
    const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
    best = *mx - *mn;
  } else {
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        const double gap = std::pow(static_cast<double>(j - i) * h, alpha);
        best = std::max(best, std::abs(d[j] - d[i]) / gap);
      }
    }
  }
  return best;
}

double bump_norm(const FunctionClassSpec& spec) {
  require_supported(spec);
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  const std::lock_guard lock(mutex);
  const auto key = std::make_pair(spec.k, spec.alpha);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double q = spec.q();
  const GridFunction phi = sample_grid(0x1.0p-14, [q](double t) { return bump(q, t); });
  const double v = holder_seminorm(phi, spec.k, spec.alpha);
  cache.emplace(key, v);
  return v;
}

int embedding_base(const FunctionClassSpec& spec) {
  require_supported(spec);
  return static_cast<int>(std::floor(std::pow(5.0, 1.0 / spec.q()))) + 1;
}

double level_scale(const FunctionClassSpec& spec, std::size_t n) {
  if (n < 1) throw DomainError("levels start at 1");
  const double R = embedding_base(spec);
  const double nn = static_cast<double>(n);
  return 6.0 / (std::numbers::pi * std::numbers::pi * nn * nn *
                std::pow(R, spec.q() * nn) * bump_norm(spec));
}

LabelSequence zero_labels(const FunctionClassSpec& spec, std::size_t depth) {
  LabelSequence labels;
  labels.R = embedding_base(spec);
  std::size_t total = 0;
  std::size_t width = 1;
  for (std::size_t n = 1; n <= depth; ++n) {
    width *= static_cast<std::size_t>(labels.R);
    total += width;
    if (total > label_budget) throw SizeError("label count exceeds the embedding budget");
    labels.levels.emplace_back(width, 0);
  }
  return labels;
}

namespace {

void check_labels(const LabelSequence& labels, const FunctionClassSpec& spec) {
  if (labels.R != embedding_base(spec)) throw DomainError("labels built for a different base R");
  std::size_t width = 1;
  std::size_t total = 0;
  for (const auto& level : labels.levels) {
    width *= static_cast<std::size_t>(labels.R);
    total += width;
    if (total > label_budget) throw SizeError("label count exceeds the embedding budget");
    if (level.size() != width) throw DomainError("level has the wrong number of labels");
    for (auto v : level) {
      if (v < -1 || v > 1) throw DomainError("labels must lie in {-1, 0, 1}");
    }
  }
}

}  // namespace

GridFunction embed(const LabelSequence& labels, const FunctionClassSpec& spec, double grid_step) {
  require_supported(spec);
  check_labels(labels, spec);
  const std::size_t m = grid_intervals(grid_step);
  GridFunction f{grid_step, std::vector<double>(m + 1, 0.0)};
  const double q = spec.q();
  double cells = 1.0;
  for (std::size_t n = 1; n <= labels.depth(); ++n) {
    cells *= labels.R;
    const auto& level = labels.levels[n - 1];
    const double scale = level_scale(spec, n);
    for (std::size_t i = 0; i <= m; ++i) {
      const double s = static_cast<double>(i) * grid_step * cells;
      const double cell = std::min(std::floor(s), cells - 1.0);
      const auto j = static_cast<std::size_t>(cell);
      if (level[j] != 0) f.values[i] += scale * level[j] * bump(q, s - cell);
    }
  }
  return f;
}

SeparationCheck verify_separation(const LabelSequence& a, const LabelSequence& b,
                                  const FunctionClassSpec& spec, double grid_step) {
  if (a.depth() != b.depth() || a.R != b.R) {
    throw DomainError("label sequences must share depth and base");
  }
  const GridFunction fa = embed(a, spec, grid_step);
  const GridFunction fb = embed(b, spec, grid_step);
  SeparationCheck out;
  for (std::size_t i = 0; i < fa.values.size(); ++i) {
    out.lhs = std::max(out.lhs, std::abs(fa.values[i] - fb.values[i]));
  }
  for (std::size_t n = 1; n <= a.depth() && out.first_level == 0; ++n) {
    if (a.levels[n - 1] != b.levels[n - 1]) out.first_level = n;
  }
  out.rhs = out.first_level == 0 ? 0.0 : 0.5 * level_scale(spec, out.first_level);
  out.grid_error = 2.0 * grid_step;
  out.ok = out.lhs >= out.rhs - out.grid_error;
  return out;
}

SingleLevelCheck single_level_identity(const LabelSequence& a, const LabelSequence& b,
                                       const FunctionClassSpec& spec, double grid_step) {
  if (a.depth() != b.depth() || a.R != b.R) {
    throw DomainError("label sequences must share depth and base");
  }
  SingleLevelCheck out;
  for (std::size_t n = 1; n <= a.depth(); ++n) {
    if (a.levels[n - 1] == b.levels[n - 1]) continue;
    if (out.level != 0) throw DomainError("labels differ at more than one level");
    out.level = n;
  }
  if (out.level == 0) throw DomainError("labels do not differ");

  const GridFunction fa = embed(a, spec, grid_step);
  const GridFunction fb = embed(b, spec, grid_step);
  for (std::size_t i = 0; i < fa.values.size(); ++i) {
    out.lhs = std::max(out.lhs, std::abs(fa.values[i] - fb.values[i]));
  }
  const auto& la = a.levels[out.level - 1];
  const auto& lb = b.levels[out.level - 1];
  int label_gap = 0;
  for (std::size_t j = 0; j < la.size(); ++j) label_gap = std::max(label_gap, std::abs(la[j] - lb[j]));
  const double scale = level_scale(spec, out.level);
  out.expected = scale * label_gap;
  out.tolerance = 2.0 * grid_step * 4.0 *
                  std::pow(static_cast<double>(a.R), spec.q() * static_cast<double>(out.level)) * scale;
  out.ok = std::abs(out.lhs - out.expected) <= out.tolerance;
  return out;
}

std::pair<LabelSequence, LabelSequence> random_label_pair(const FunctionClassSpec& spec,
                                                          std::size_t depth, std::uint64_t seed,
                                                          std::size_t index) {
  LabelSequence a = zero_labels(spec, depth);
  LabelSequence b = a;
  CounterStream rng(seed, static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x1abe1u);
  const std::size_t split = 1 + static_cast<std::size_t>(rng() % depth);
  auto draw = [&rng] { return static_cast<std::int8_t>(static_cast<int>(rng() % 3) - 1); };
  for (std::size_t n = 1; n <= depth; ++n) {
    auto& la = a.levels[n - 1];
    auto& lb = b.levels[n - 1];
    for (std::size_t j = 0; j < la.size(); ++j) {
      la[j] = draw();
      lb[j] = n < split ? la[j] : draw();
    }
  }
  // Make sure the sequences really split at that level.
  if (a.levels[split - 1] == b.levels[split - 1]) {
    auto& v = b.levels[split - 1][0];
    v = static_cast<std::int8_t>(v == 1 ? -1 : v + 1);
  }
  return {std::move(a), std::move(b)};
}

NetCount lipschitz_net_count(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
  const double steps_f = std::round(1.0 / eps);
  if (std::abs(steps_f * eps - 1.0) > 1e-9) throw DomainError("1/eps must be an integer");
  if (steps_f > 65536.0) throw SizeError("1/eps above 2^16");
  const auto steps = static_cast<std::size_t>(steps_f);
  const std::size_t levels = 2 * steps + 1;

  std::vector<double> ways(levels, 1.0);
  std::vector<double> next(levels);
  double log_scale = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    double top = 0.0;
    for (std::size_t j = 0; j < levels; ++j) {
      double v = ways[j];
      if (j > 0) v += ways[j - 1];
      if (j + 1 < levels) v += ways[j + 1];
      next[j] = v;
      top = std::max(top, v);
    }
    ways.swap(next);
    // Rescale only when needed, so small counts stay exact integers.
    if (top > 1e250) {
      for (double& v : ways) v /= top;
      log_scale += std::log(top);
    }
  }
  double total = 0.0;
  for (double v : ways) total += v;
  return {std::log(total) + log_scale, "exact"};
}

ScaleEstimate lipschitz_order_estimate(std::span<const double> eps_list, std::size_t tail_window,
                                       const ScalingFamily& family) {
  std::vector<double> log_counts;
  for (double e : eps_list) log_counts.push_back(lipschitz_net_count(e).log_count);
  return ratio_estimate(eps_list, log_counts, family.p(), family.q(), tail_window);
}

void write_grid_csv(const GridFunction& f, std::ostream& out) {
  out << "t,f\n";
  out.precision(17);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out << static_cast<double>(i) * f.grid_step << ',' << f.values[i] << '\n';
  }
}

}  // namespace scales
