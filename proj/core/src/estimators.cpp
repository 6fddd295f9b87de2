#include "scales/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "scales/errors.hpp"

namespace scales {

namespace {

bool is_upper_quantity(const std::string& name) {
  return name == quantity::packing || name == quantity::packing_star ||
         name == quantity::box_upper || name == quantity::box_upper_star ||
         name == quantity::quant_upper;
}

ScaleEstimate exact_value(double value, const std::string& method) {
  ScaleEstimate e;
  e.lower = e.upper = value;
  e.method = method;
  return e;
}

// Lower-type quantities take the liminf proxy, upper-type ones the limsup proxy.
QuantityMap split_oracle(double low, double high, const std::string& method,
                         const std::vector<double>& eps, const std::vector<double>& sequence,
                         std::size_t window) {
  QuantityMap out;
  for (const auto& name : quantity_names()) {
    ScaleEstimate e = exact_value(is_upper_quantity(name) ? high : low, method);
    e.eps = eps;
    e.sequence = sequence;
    e.window = window;
    out[name] = e;
  }
  return out;
}

QuantityMap product_oracle(const ProductSpaceSpec& spec, const ScalingFamily& family,
                           std::size_t depth, std::size_t window, std::vector<double> eps) {
  if (spec.params()) {
    const OrderBounds b = inhomogeneous_orders(spec, depth);
    std::vector<double> witness_eps;
    for (std::size_t w : b.witnesses) witness_eps.push_back(std::exp(spec.log_eps(w)));
    return split_oracle(b.lower, b.upper, "block-witness", witness_eps, b.values, b.values.size());
  }
  const std::vector<double> seq = oracle_ratio_sequence(spec, family, depth);
  const std::size_t w = std::clamp<std::size_t>(window, 1, seq.size());
  const auto tail = std::span<const double>(seq).last(w);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return split_oracle(*lo, *hi, "ratio-window", eps, seq, w);
}

}  // namespace

QuantityMap constant_oracle(double value) {
  QuantityMap out;
  for (const auto& name : quantity_names()) out[name] = exact_value(value, "analytic");
  return out;
}

EstimateBundle assemble(const EmpiricalMeasure& mu, const ScalingFamily& family,
                        std::span<const double> eps_grid, const AssembleConfig& config) {
  EstimateBundle bundle;
  bundle.source = "measure";
  bundle.family = family;
  bundle.eps.assign(eps_grid.begin(), eps_grid.end());
  MeasureScaleReport report = measure_scale_report(mu, family, eps_grid, config.measure);
  bundle.quantities = report.quantities;
  bundle.errors = report.errors;
  bundle.detail = std::move(report);
  return bundle;
}

EstimateBundle assemble(const ProductSpaceSpec& spec, const ScalingFamily& family,
                        std::size_t depth, const AssembleConfig& config) {
  if (depth < 1 || depth > spec.depth()) throw DomainError("depth outside the spec");
  EstimateBundle bundle;
  bundle.family = family;
  for (std::size_t n = 1; n <= depth; ++n) bundle.eps.push_back(std::exp(spec.log_eps(n)));

  try {
    bundle.oracle = product_oracle(spec, family, depth, config.oracle_window, bundle.eps);
  } catch (const Error& e) {
    bundle.errors["oracle"] = e.what();
  }

  double log_points = 0.0;
  for (std::size_t k = 1; k <= depth; ++k) log_points += spec.log_card(k);
  const bool small = log_points <= std::log(static_cast<double>(config.materialize_max_points)) + 1e-9;
  if (small && !spec.params()) {
    bundle.source = "product";
    try {
      const MaterializedProduct z = materialize(spec, depth);
      MeasureScaleReport report = measure_scale_report(z.measure, family, bundle.eps, config.measure);
      bundle.quantities = report.quantities;
      for (const auto& [stage, message] : report.errors) bundle.errors[stage] = message;
      bundle.detail = std::move(report);
      return bundle;
    } catch (const Error& e) {
      bundle.errors["materialize"] = e.what();
    }
  }
  // Uniform measure on a product: every ball of radius eps_n has mass
  // 1/N_{eps_n}, so all ten quantities are read off the exact counts.
  bundle.source = "product-oracle";
  bundle.quantities = bundle.oracle;
  return bundle;
}

TheoremReport grade(const EstimateBundle& bundle, double tolerance) {
  return grade_quantities(bundle.quantities, bundle.oracle, tolerance);
}

}  // namespace scales
