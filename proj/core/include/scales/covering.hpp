#pragma once

#include <cstddef>
#include <vector>

#include "scales/metric_space.hpp"
#include "scales/scaling.hpp"

namespace scales {

// Open balls B(c, r) = {y : d(c, y) < r} centred at points of the space.
struct BallCover {
  std::vector<std::size_t> centers;
  std::vector<double> radii;
};

// Balls whose centres satisfy d(c_i, c_j) >= r_i + r_j.
struct Packing {
  std::vector<std::size_t> centers;
  std::vector<double> radii;
};

inline constexpr std::size_t exact_search_limit = 24;
inline constexpr std::size_t exact_hausdorff_limit = 14;
inline constexpr std::size_t exact_packing_assignments = 60;

bool is_cover(const FiniteMetricSpace& space, const BallCover& cover);
bool is_packing(const FiniteMetricSpace& space, const Packing& packing);

// Branch and bound, |X| <= 24.
BallCover minimal_cover(const FiniteMetricSpace& space, double eps);
std::size_t covering_number_exact(const FiniteMetricSpace& space, double eps);

// Repeatedly takes the centre covering the most uncovered points.
BallCover greedy_cover(const FiniteMetricSpace& space, double eps);
std::size_t covering_number_greedy(const FiniteMetricSpace& space, double eps);

// Largest subset with pairwise distances >= eps, |X| <= 24.
std::vector<std::size_t> maximum_packing(const FiniteMetricSpace& space, double eps);
std::size_t packing_number_exact(const FiniteMetricSpace& space, double eps);

// Index-order scan keeping points at distance >= eps from all kept points.
std::vector<std::size_t> greedy_packing(const FiniteMetricSpace& space, double eps);
std::size_t packing_number_greedy(const FiniteMetricSpace& space, double eps);

// Pairwise distances clipped to (0, eps], plus eps itself.
std::vector<double> default_radius_menu(const FiniteMetricSpace& space, double eps);

struct Premeasure {
  double value = 0.0;
  double log_value = 0.0;
  bool exact = false;
  std::vector<std::size_t> centers;
  std::vector<double> radii;
};

// min over covers by menu radii of sum scl_alpha(r_j).
Premeasure hausdorff_premeasure(const FiniteMetricSpace& space, const ScalingFamily& family,
                                double alpha, const std::vector<double>& radius_menu);

// max over packings by menu radii of sum scl_alpha(r_i).
Premeasure packing_premeasure(const FiniteMetricSpace& space, const ScalingFamily& family,
                              double alpha, const std::vector<double>& radius_menu);

}  // namespace scales
