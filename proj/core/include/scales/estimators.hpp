#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scales/measure.hpp"
#include "scales/product_space.hpp"
#include "scales/scaling.hpp"
#include "scales/theorems.hpp"

namespace scales {

struct AssembleConfig {
  MeasureReportConfig measure;
  // Number of trailing oracle ratios whose min and max give the oracle values.
  std::size_t oracle_window = 3;
  // Products up to this many points are materialized and estimated directly.
  std::size_t materialize_max_points = materialize_limit;
};

struct EstimateBundle {
  // "measure", "product" or "product-oracle" (too large to materialize).
  std::string source;
  ScalingFamily family{1, 1};
  std::vector<double> eps;
  QuantityMap quantities;
  QuantityMap oracle;
  // Failed stage or quantity -> message. Other entries stay usable.
  std::map<std::string, std::string> errors;
  std::optional<MeasureScaleReport> detail;
};

EstimateBundle assemble(const EmpiricalMeasure& mu, const ScalingFamily& family,
                        std::span<const double> eps_grid, const AssembleConfig& config = {});

// The eps grid is eps_1..eps_depth of the spec.
EstimateBundle assemble(const ProductSpaceSpec& spec, const ScalingFamily& family,
                        std::size_t depth, const AssembleConfig& config = {});

// Every quantity set to the same value, e.g. an analytic dimension.
QuantityMap constant_oracle(double value);

TheoremReport grade(const EstimateBundle& bundle, double tolerance);

}  // namespace scales
