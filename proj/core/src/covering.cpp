#include "scales/covering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "scales/errors.hpp"

namespace scales {

namespace {

using Mask = std::uint32_t;

void require_radius(double eps) {
  if (!(eps > 0.0)) throw DomainError("radius must be positive");
}

void require_exact_size(const FiniteMetricSpace& space, std::size_t limit, const char* what) {
  if (space.size() > limit) {
    throw SizeError(std::string(what) + ": exact search is limited to " + std::to_string(limit) +
                    " points");
  }
}

std::vector<Mask> ball_masks(const FiniteMetricSpace& space, double r) {
  const std::size_t n = space.size();
  std::vector<Mask> masks(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      if (space(c, j) < r) masks[c] |= Mask{1} << j;
    }
  }
  return masks;
}

struct CoverSearch {
  const std::vector<Mask>& masks;
  Mask full;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;

  void run(Mask covered) {
    if (covered == full) {
      if (current.size() < best.size()) best = current;
      return;
    }
    if (current.size() + 1 >= best.size()) return;
    const Mask open = full & ~covered;
    int max_gain = 0;
    for (Mask m : masks) max_gain = std::max(max_gain, std::popcount(m & open));
    const std::size_t needed =
        (static_cast<std::size_t>(std::popcount(open)) + max_gain - 1) / max_gain;
    if (current.size() + needed >= best.size()) return;

    const int u = std::countr_zero(open);
    std::vector<std::size_t> options;
    for (std::size_t c = 0; c < masks.size(); ++c) {
      if (masks[c] >> u & 1u) options.push_back(c);
    }
    std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return std::popcount(masks[a] & open) > std::popcount(masks[b] & open);
    });
    for (std::size_t c : options) {
      current.push_back(c);
      run(covered | masks[c]);
      current.pop_back();
    }
  }
};

struct CliqueSearch {
  const std::vector<Mask>& adj;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;

  void run(Mask cand) {
    if (cand == 0) {
      if (current.size() > best.size()) best = current;
      return;
    }
    if (current.size() + std::popcount(cand) <= best.size()) return;
    const int v = std::countr_zero(cand);
    current.push_back(static_cast<std::size_t>(v));
    run(cand & adj[v]);
    current.pop_back();
    run(cand & ~(Mask{1} << v));
  }
};

}  // namespace

bool is_cover(const FiniteMetricSpace& space, const BallCover& cover) {
  if (cover.centers.size() != cover.radii.size()) return false;
  for (std::size_t y = 0; y < space.size(); ++y) {
    bool hit = false;
    for (std::size_t i = 0; i < cover.centers.size() && !hit; ++i) {
      hit = space(cover.centers[i], y) < cover.radii[i];
    }
    if (!hit) return false;
  }
  return true;
}

bool is_packing(const FiniteMetricSpace& space, const Packing& packing) {
  if (packing.centers.size() != packing.radii.size()) return false;
  for (std::size_t i = 0; i < packing.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < packing.centers.size(); ++j) {
      if (space(packing.centers[i], packing.centers[j]) < packing.radii[i] + packing.radii[j]) {
        return false;
      }
    }
  }
  return true;
}

BallCover minimal_cover(const FiniteMetricSpace& space, double eps) {
  require_radius(eps);
  require_exact_size(space, exact_search_limit, "covering_number_exact");
  const std::size_t n = space.size();
  const auto masks = ball_masks(space, eps);
  CoverSearch search{masks, n == 32 ? ~Mask{0} : (Mask{1} << n) - 1, {}, {}};
  search.best = greedy_cover(space, eps).centers;
  search.run(0);
  std::sort(search.best.begin(), search.best.end());
  return {search.best, std::vector<double>(search.best.size(), eps)};
}

std::size_t covering_number_exact(const FiniteMetricSpace& space, double eps) {
  return minimal_cover(space, eps).centers.size();
}

BallCover greedy_cover(const FiniteMetricSpace& space, double eps) {
  require_radius(eps);
  const std::size_t n = space.size();
  std::vector<std::size_t> gain(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    const double* row = space.row(c);
    for (std::size_t j = 0; j < n; ++j) gain[c] += row[j] < eps;
  }
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  BallCover cover;
  while (remaining > 0) {
    const std::size_t c =
        static_cast<std::size_t>(std::max_element(gain.begin(), gain.end()) - gain.begin());
    cover.centers.push_back(c);
    const double* row = space.row(c);
    for (std::size_t u = 0; u < n; ++u) {
      if (covered[u] || !(row[u] < eps)) continue;
      covered[u] = 1;
      --remaining;
      const double* urow = space.row(u);
      for (std::size_t k = 0; k < n; ++k) gain[k] -= urow[k] < eps;
    }
  }
  cover.radii.assign(cover.centers.size(), eps);
  return cover;
}

std::size_t covering_number_greedy(const FiniteMetricSpace& space, double eps) {
  return greedy_cover(space, eps).centers.size();
}

std::vector<std::size_t> maximum_packing(const FiniteMetricSpace& space, double eps) {
  require_radius(eps);
  require_exact_size(space, exact_search_limit, "packing_number_exact");
  const std::size_t n = space.size();
  std::vector<Mask> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && space(i, j) >= eps) adj[i] |= Mask{1} << j;
    }
  }
  CliqueSearch search{adj, {}, {}};
  search.best = greedy_packing(space, eps);
  search.run(n == 32 ? ~Mask{0} : (Mask{1} << n) - 1);
  std::sort(search.best.begin(), search.best.end());
  return search.best;
}

std::size_t packing_number_exact(const FiniteMetricSpace& space, double eps) {
  return maximum_packing(space, eps).size();
}

std::vector<std::size_t> greedy_packing(const FiniteMetricSpace& space, double eps) {
  require_radius(eps);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double* row = space.row(i);
    bool ok = true;
    for (std::size_t k : kept) {
      if (row[k] < eps) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  return kept;
}

std::size_t packing_number_greedy(const FiniteMetricSpace& space, double eps) {
  return greedy_packing(space, eps).size();
}

std::vector<double> default_radius_menu(const FiniteMetricSpace& space, double eps) {
  require_radius(eps);
  std::vector<double> menu;
  for (double d : space.distinct_distances()) {
    if (d <= eps) menu.push_back(d);
  }
  if (menu.empty() || menu.back() != eps) menu.push_back(eps);
  return menu;
}

namespace {

std::vector<double> checked_menu(const std::vector<double>& radius_menu) {
  if (radius_menu.empty()) throw DomainError("radius menu must be non-empty");
  std::vector<double> menu = radius_menu;
  std::sort(menu.begin(), menu.end());
  menu.erase(std::unique(menu.begin(), menu.end()), menu.end());
  if (!(menu.front() > 0.0)) throw DomainError("radius menu is infeasible: radius 0");
  return menu;
}

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

Premeasure hausdorff_exact(const FiniteMetricSpace& space, const std::vector<double>& menu,
                           const std::vector<double>& logw) {
  const std::size_t n = space.size();
  struct Ball {
    Mask mask;
    std::size_t center;
    std::size_t radius;
  };
  // For a fixed centre a larger radius costs more, so among equal masks only
  // the smallest radius is kept.
  std::vector<Ball> balls;
  for (std::size_t c = 0; c < n; ++c) {
    Mask previous = 0;
    for (std::size_t r = 0; r < menu.size(); ++r) {
      Mask m = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (space(c, j) < menu[r]) m |= Mask{1} << j;
      }
      if (m != previous) balls.push_back({m, c, r});
      previous = m;
    }
  }

  const Mask full = (Mask{1} << n) - 1;
  std::vector<double> best(std::size_t{1} << n, INFINITY);
  std::vector<std::uint32_t> choice(best.size(), 0);
  best[0] = -INFINITY;
  for (Mask s = 1; s <= full; ++s) {
    const int u = std::countr_zero(s);
    for (std::uint32_t b = 0; b < balls.size(); ++b) {
      if (!(balls[b].mask >> u & 1u)) continue;
      const double v = log_add(logw[balls[b].radius], best[s & ~balls[b].mask]);
      if (v < best[s]) {
        best[s] = v;
        choice[s] = b;
      }
    }
  }

  Premeasure out;
  out.exact = true;
  out.log_value = best[full];
  out.value = std::exp(out.log_value);
  for (Mask s = full; s != 0; s &= ~balls[choice[s]].mask) {
    out.centers.push_back(balls[choice[s]].center);
    out.radii.push_back(menu[balls[choice[s]].radius]);
  }
  return out;
}

Premeasure hausdorff_greedy(const FiniteMetricSpace& space, const std::vector<double>& menu,
                            const std::vector<double>& logw) {
  const std::size_t n = space.size();
  std::vector<std::vector<std::size_t>> order(n);
  for (std::size_t c = 0; c < n; ++c) {
    order[c].resize(n);
    std::iota(order[c].begin(), order[c].end(), 0);
    const double* row = space.row(c);
    std::stable_sort(order[c].begin(), order[c].end(),
                     [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  }
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  Premeasure out;
  out.log_value = -INFINITY;
  while (remaining > 0) {
    double best_score = -INFINITY;
    std::size_t best_c = 0;
    std::size_t best_r = 0;
    for (std::size_t c = 0; c < n; ++c) {
      const double* row = space.row(c);
      std::size_t k = 0;
      std::size_t fresh = 0;
      for (std::size_t r = 0; r < menu.size(); ++r) {
        while (k < n && row[order[c][k]] < menu[r]) fresh += !covered[order[c][k++]];
        if (fresh == 0) continue;
        const double score = std::log(static_cast<double>(fresh)) - logw[r];
        if (score > best_score) {
          best_score = score;
          best_c = c;
          best_r = r;
        }
      }
    }
    out.centers.push_back(best_c);
    out.radii.push_back(menu[best_r]);
    out.log_value = log_add(out.log_value, logw[best_r]);
    const double* row = space.row(best_c);
    for (std::size_t j = 0; j < n; ++j) {
      if (!covered[j] && row[j] < menu[best_r]) {
        covered[j] = 1;
        --remaining;
      }
    }
  }
  out.value = std::exp(out.log_value);
  return out;
}

struct PackingSearch {
  const FiniteMetricSpace& space;
  const std::vector<double>& menu;
  std::vector<double> weight{};  // relative to the largest gauge value
  std::vector<std::size_t> centers{};
  std::vector<std::size_t> radii{};
  double current = 0.0;
  double best = -1.0;
  std::vector<std::size_t> best_centers{};
  std::vector<std::size_t> best_radii{};

  bool fits(std::size_t c, std::size_t r) const {
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (space(c, centers[i]) < menu[r] + menu[radii[i]]) return false;
    }
    return true;
  }

  void run(std::size_t point) {
    if (current + static_cast<double>(space.size() - point) * weight.back() <= best) return;
    if (point == space.size()) {
      best = current;
      best_centers = centers;
      best_radii = radii;
      return;
    }
    for (std::size_t r = menu.size(); r-- > 0;) {
      if (!fits(point, r)) continue;
      centers.push_back(point);
      radii.push_back(r);
      current += weight[r];
      run(point + 1);
      current -= weight[r];
      centers.pop_back();
      radii.pop_back();
    }
    run(point + 1);
  }
};

}  // namespace

Premeasure hausdorff_premeasure(const FiniteMetricSpace& space, const ScalingFamily& family,
                                double alpha, const std::vector<double>& radius_menu) {
  const auto menu = checked_menu(radius_menu);
  std::vector<double> logw;
  for (double r : menu) logw.push_back(log_gauge(family, alpha, r));
  if (space.size() <= exact_hausdorff_limit) return hausdorff_exact(space, menu, logw);
  return hausdorff_greedy(space, menu, logw);
}

Premeasure packing_premeasure(const FiniteMetricSpace& space, const ScalingFamily& family,
                              double alpha, const std::vector<double>& radius_menu) {
  const auto menu = checked_menu(radius_menu);
  std::vector<double> logw;
  for (double r : menu) logw.push_back(log_gauge(family, alpha, r));
  const double log_top = logw.back();

  PackingSearch search{space, menu};
  for (double lw : logw) search.weight.push_back(std::exp(lw - log_top));

  Premeasure out;
  if (space.size() * menu.size() <= exact_packing_assignments) {
    search.run(0);
    out.exact = true;
  } else {
    // Largest gauge first, then lowest index.
    for (std::size_t r = menu.size(); r-- > 0;) {
      for (std::size_t c = 0; c < space.size(); ++c) {
        if (std::find(search.centers.begin(), search.centers.end(), c) !=
                search.centers.end() ||
            !search.fits(c, r)) {
          continue;
        }
        search.centers.push_back(c);
        search.radii.push_back(r);
        search.current += search.weight[r];
      }
    }
    search.best = search.current;
    search.best_centers = search.centers;
    search.best_radii = search.radii;
  }
  out.log_value = std::log(search.best) + log_top;
  out.value = std::exp(out.log_value);
  out.centers = search.best_centers;
  for (std::size_t r : search.best_radii) out.radii.push_back(menu[r]);
  return out;
}

}  // namespace scales
