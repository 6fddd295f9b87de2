#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scales/scale_estimate.hpp"

namespace scales {

// The gauge family scl^{p,q}_alpha(eps) = 1 / exp^{p}(alpha * log_+^{q}(1/eps)).
class ScalingFamily {
 public:
  ScalingFamily(int p, int q);

  static ScalingFamily dim() { return {1, 1}; }
  static ScalingFamily ord() { return {2, 1}; }

  int p() const { return p_; }
  int q() const { return q_; }

  bool operator==(const ScalingFamily&) const = default;

 private:
  int p_;
  int q_;
};

// log scl_alpha(eps), requires eps in (0,1) and alpha > 0.
double log_scaling(const ScalingFamily& family, double alpha, double eps);

// Same quantity from log(1/eps) > 0, so that radii far below the smallest
// double can be evaluated.
double log_scaling_from_log_inv(const ScalingFamily& family, double alpha,
                                double log_inv_eps);

double eval_scaling(const ScalingFamily& family, double alpha, double eps);

// Gauge used by the pre-measures, defined for every radius r > 0. Below 1 it
// coincides with log_scaling; above 1 the innermost logarithm keeps its sign,
// so for the dim family the gauge is r^alpha on the whole half line.
double log_gauge(const ScalingFamily& family, double alpha, double r);

struct ScalingConditionReport {
  bool holds = false;
  bool lambda_power_ok = false;  // scl_a(e) / scl_b(e^lambda)
  bool power_ok = false;         // scl_a(e) / scl_b(e)^lambda
  std::vector<double> eps;
  std::vector<double> log_ratio_lambda_power;
  std::vector<double> log_ratio_power;
  std::size_t window = 0;
  double threshold = 0.0;
};

ScalingConditionReport check_scaling_condition(const ScalingFamily& family, double alpha,
                                               double beta, double lambda,
                                               std::span<const double> eps_grid,
                                               std::size_t window = 8,
                                               double threshold = 1e-3);

enum class TrendMode { lower, upper };

struct ThresholdOptions {
  double lo = 0.0;
  double hi = 4.0;
  int iterations = 40;
  std::size_t tail_window = 8;
  int max_widenings = 10;
};

// Bisection over alpha on the tail trend of f(eps) * scl_alpha(eps), where f
// is given by its logarithm on a strictly decreasing grid. The returned
// estimate has lower == upper == the located threshold.
ScaleEstimate threshold_alpha(std::span<const double> eps, std::span<const double> log_f,
                              const ScalingFamily& family, TrendMode mode,
                              const ThresholdOptions& options = {});

enum class DegeneratePolicy { raise, zero };

// origin:     g(f_n) / h(eps_n)
// anchored:   (g(f_n) - g(f_0)) / (h(eps_n) - h(eps_0))
// regression: least-squares slope of g(f_k) on h(eps_k) over k = 0..n
enum class RatioForm { origin, anchored, regression };

const char* to_string(RatioForm form);

struct RatioOptions {
  RatioForm form = RatioForm::origin;
  // What to do with counts <= 1 (or other undefined log compositions).
  DegeneratePolicy degenerate = DegeneratePolicy::raise;
};

// rho_n = log^{p}(count_n) / log^{q}(1/eps_n) from log counts; lower/upper are
// the min/max over the last tail_window entries.
ScaleEstimate ratio_estimate(std::span<const double> eps, std::span<const double> log_counts,
                             int p, int q, std::size_t tail_window,
                             const RatioOptions& options = {});

// Iterated logarithm of x given log(x); returns false if an argument along
// the way is not positive.
bool iterated_log_from_log(double log_x, int times, double& out);

}  // namespace scales
