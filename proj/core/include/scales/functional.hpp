#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "scales/scale_estimate.hpp"
#include "scales/scaling.hpp"

namespace scales {

// The Hölder class F^{d,k,alpha}: C^k functions [0,1]^d -> [-1,1] whose k-th
// derivative is alpha-Hölder with constant at most 1.
struct FunctionClassSpec {
  int d = 1;
  int k = 0;
  double alpha = 1.0;

  double q() const { return k + alpha; }
};

// Samples on the uniform grid of [0,1] with spacing grid_step.
struct GridFunction {
  double grid_step = 0.0;
  std::vector<double> values;
};

// Labels lambda_n in {-1,0,1}^{R^{dn}} for n = 1..depth.
struct LabelSequence {
  int R = 0;
  std::vector<std::vector<std::int8_t>> levels;

  std::size_t depth() const { return levels.size(); }
};

// (2t)^q (2-2t)^q on (0,1), zero elsewhere.
double bump(double q, double t);

GridFunction sample_grid(double grid_step, const std::function<double(double)>& f);

// max over grid pairs of |D^k f(x) - D^k f(y)| / |x-y|^alpha, with D^k the
// k-th forward difference quotient.
double holder_seminorm(const GridFunction& f, int k, double alpha);

// ||phi||_q of the bump, computed once per (k, alpha) at grid 2^-14.
double bump_norm(const FunctionClassSpec& spec);

// R = floor(5^{1/q}) + 1.
int embedding_base(const FunctionClassSpec& spec);

// eps_n = 6 / (pi^2 n^2 R^{qn} ||phi||_q).
double level_scale(const FunctionClassSpec& spec, std::size_t n);

LabelSequence zero_labels(const FunctionClassSpec& spec, std::size_t depth);

inline constexpr std::size_t label_budget = 1'000'000;

// f = sum_n eps_n sum_j lambda_{n,j} phi(R^n x - j): one bump per cell
// [j/R^n, (j+1)/R^n) of level n. Only d = 1 is supported.
GridFunction embed(const LabelSequence& labels, const FunctionClassSpec& spec, double grid_step);

struct SeparationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double grid_error = 0.0;
  std::size_t first_level = 0;  // 0 when the labels agree
  bool ok = false;
};

SeparationCheck verify_separation(const LabelSequence& a, const LabelSequence& b,
                                  const FunctionClassSpec& spec, double grid_step);

// Labels a and b must differ at exactly one level n. The embedded functions
// are then eps_n * ||lambda_n - lambda'_n||_inf apart in sup norm; on a grid
// the identity holds up to 2 * grid_step * 4 R^{qn} eps_n.
struct SingleLevelCheck {
  std::size_t level = 0;
  double lhs = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

SingleLevelCheck single_level_identity(const LabelSequence& a, const LabelSequence& b,
                                       const FunctionClassSpec& spec, double grid_step);

// Pair `index` of a seeded family: both sequences agree below a first
// differing level drawn uniformly from 1..depth and are independent from there on.
std::pair<LabelSequence, LabelSequence> random_label_pair(const FunctionClassSpec& spec,
                                                          std::size_t depth, std::uint64_t seed,
                                                          std::size_t index);

struct NetCount {
  double log_count = 0.0;
  const char* regime = "exact";
};

// Number of lattice functions on the step-eps grid with values in
// eps*Z ∩ [-1,1] and increments in {-eps, 0, eps}. These form an
// eps-separated subset of F^{1,0,1} and a 2eps-net of it.
NetCount lipschitz_net_count(double eps);

ScaleEstimate lipschitz_order_estimate(std::span<const double> eps_list, std::size_t tail_window,
                                       const ScalingFamily& family = ScalingFamily::ord());

void write_grid_csv(const GridFunction& f, std::ostream& out);

}  // namespace scales
