#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "scales/measure.hpp"
#include "scales/metric_space.hpp"
#include "scales/scale_estimate.hpp"
#include "scales/scaling.hpp"

namespace scales {

struct InhomogeneousParams {
  double alpha = 0.0;
  double beta = 0.0;
  long c = 0;
};

// Z = prod_k Z_k with delta(x, y) = eps_m, m the first index where x and y
// differ. Cardinalities are stored as log log Card Z_k so that the
// doubly-exponential sequences of the inhomogeneous example fit in a double.
class ProductSpaceSpec {
 public:
  ProductSpaceSpec(std::vector<double> log_log_cards, std::vector<double> log_eps,
                   std::optional<InhomogeneousParams> params = std::nullopt);

  static ProductSpaceSpec from_log_cards(const std::vector<double>& log_cards,
                                         std::vector<double> log_eps);
  // Every factor of size `card`, eps_n = e^{-n}.
  static ProductSpaceSpec constant(double card, std::size_t depth);

  std::size_t depth() const { return log_log_cards_.size(); }
  // 1-based accessors.
  double log_log_card(std::size_t k) const { return log_log_cards_.at(k - 1); }
  double log_card(std::size_t k) const;
  double log_eps(std::size_t n) const { return log_eps_.at(n - 1); }

  const std::vector<double>& log_log_cards() const { return log_log_cards_; }
  const std::vector<double>& log_eps_values() const { return log_eps_; }
  const std::optional<InhomogeneousParams>& params() const { return params_; }

 private:
  std::vector<double> log_log_cards_;
  std::vector<double> log_eps_;
  std::optional<InhomogeneousParams> params_;
};

// log N_{eps_n}(Z) = sum_{k<=n} log Card Z_k (may be +inf in double range).
double exact_covering_log(const ProductSpaceSpec& spec, std::size_t n);
// log of the same sum, finite for every spec; requires n >= 1.
double exact_covering_loglog(const ProductSpaceSpec& spec, std::size_t n);
double exact_ball_mass_log(const ProductSpaceSpec& spec, std::size_t n);

// lambda_n = log(sum_{k<=n} log Card Z_k) / (n log C), n = 1..n_max.
std::vector<double> lambda_sequence(const ProductSpaceSpec& spec, double C, std::size_t n_max);

// Ratio sequence log^{p} N_{eps_n} / log^{q}(1/eps_n), n = 1..n_max, from the
// exact covering numbers. Entries whose log composition is undefined are 0.
std::vector<double> oracle_ratio_sequence(const ProductSpaceSpec& spec,
                                          const ScalingFamily& family, std::size_t n_max);

ProductSpaceSpec inhomogeneous_spec(double alpha, double beta, std::size_t k_max);

struct OrderBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::size_t> witnesses;
  std::vector<double> values;
};

OrderBounds inhomogeneous_orders(const ProductSpaceSpec& spec, std::size_t n_max,
                                 double tail_fraction = 0.5);

struct MaterializedProduct {
  std::shared_ptr<const FiniteMetricSpace> space;
  EmpiricalMeasure measure;
};

inline constexpr std::size_t materialize_limit = std::size_t{1} << 14;

MaterializedProduct materialize(const ProductSpaceSpec& spec, std::size_t n);

}  // namespace scales
