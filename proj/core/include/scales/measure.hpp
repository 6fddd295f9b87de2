#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scales/metric_space.hpp"
#include "scales/scale_estimate.hpp"
#include "scales/scaling.hpp"
#include "scales/theorems.hpp"

namespace scales {

class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::shared_ptr<const FiniteMetricSpace> space, std::vector<double> weights);

  static EmpiricalMeasure uniform(std::shared_ptr<const FiniteMetricSpace> space);
  static EmpiricalMeasure dirac(std::shared_ptr<const FiniteMetricSpace> space, std::size_t at);

  const FiniteMetricSpace& space() const { return *space_; }
  const std::shared_ptr<const FiniteMetricSpace>& space_ptr() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_; }
  // Indices with positive weight, increasing.
  const std::vector<std::size_t>& support() const { return support_; }

 private:
  std::shared_ptr<const FiniteMetricSpace> space_;
  std::vector<double> weights_;
  std::vector<std::size_t> support_;
  double total_ = 0.0;
};

// Mass of the open ball B(x, eps).
double local_mass(const EmpiricalMeasure& mu, std::size_t x, double eps);

struct LocalScaleOptions {
  std::size_t tail_window = 3;
  RatioForm form = RatioForm::origin;
  bool cross_check = true;
  ThresholdOptions threshold;
};

// Growth of 1/mu(B(x, eps)) against the family, read from ratio estimates and
// cross-checked with threshold_alpha. When the smallest ball has zero mass the
// estimate is pinned at the bracket end and flagged as degenerate.
ScaleEstimate local_scale(const EmpiricalMeasure& mu, std::size_t x, const ScalingFamily& family,
                          std::span<const double> eps_grid, const LocalScaleOptions& options = {});

double quantization_cost(const EmpiricalMeasure& mu, const std::vector<std::size_t>& centers);

struct QuantizerResult {
  std::vector<std::size_t> centers;
  double cost = 0.0;
  std::size_t n_requested = 0;
  bool exact = false;
  int restart = -1;  // restart that produced the result in the heuristic regime
};

struct QuantizerOptions {
  std::uint64_t seed = 0;
  int restarts = 20;
  double exhaustive_limit = 1e6;
  // Full one-for-one swap passes run when the support is at most this large.
  std::size_t full_swap_limit = 256;
  // Caps restarts * |supp| * (n + cell candidates), the cost of one local
  // search pass summed over restarts, in the heuristic regime. At least one
  // restart always runs.
  double work_limit = INFINITY;
  // When set, the search may stop at the first solution with cost <= target.
  std::optional<double> target_cost;
};

QuantizerResult best_n_median(const EmpiricalMeasure& mu, std::size_t n,
                              const QuantizerOptions& options = {});

struct QuantizationCount {
  std::size_t n = 0;
  bool exact = false;
  double cost = 0.0;  // cost of a witness with n centres
};

QuantizationCount quantization_number(const EmpiricalMeasure& mu, double eps,
                                      const QuantizerOptions& options = {});

struct MassEscape {
  double escaped_mass = 0.0;
  double bound = 0.0;
  bool ok = false;
};

MassEscape mass_escape_check(const EmpiricalMeasure& mu, const QuantizerResult& quantizer,
                             double r);

struct MeasureReportConfig {
  std::size_t tail_window = 3;
  RatioForm form = RatioForm::origin;
  double low_percentile = 0.05;
  double high_percentile = 0.95;
  bool quantization = true;
  // Lighter than the best_n_median defaults: one report solves many n-median
  // problems per eps on supports of up to 2^14 points.
  QuantizerOptions quantizer{.full_swap_limit = 64, .work_limit = 1e7, .target_cost = std::nullopt};
  ThresholdOptions threshold;
};

struct PointScale {
  std::size_t index = 0;
  double weight = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;
};

struct MeasureScaleReport {
  std::vector<double> eps;
  std::vector<PointScale> points;
  // Covering numbers of the support, bracketed when exact search is too big.
  std::vector<double> cover_lower;
  std::vector<double> cover_upper;
  bool cover_exact = false;
  std::vector<double> quantization;
  bool quantization_exact = false;
  QuantityMap quantities;
  // Stage name -> error message for stages that failed; the other
  // quantities are still reported.
  std::map<std::string, std::string> errors;
  TheoremReport arrows;  // graded at tolerance 0
};

MeasureScaleReport measure_scale_report(const EmpiricalMeasure& mu, const ScalingFamily& family,
                                        std::span<const double> eps_grid,
                                        const MeasureReportConfig& config = {});

// Smallest value whose cumulative weight reaches fraction pct of the total.
double weighted_percentile(std::vector<std::pair<double, double>> value_weight, double pct);

}  // namespace scales
