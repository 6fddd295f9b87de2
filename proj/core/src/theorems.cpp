#include "scales/theorems.hpp"

#include <algorithm>
#include <cstdio>

#include "scales/errors.hpp"

namespace scales {

const std::vector<std::string>& quantity_names() {
  static const std::vector<std::string> names = {
      quantity::hausdorff,      quantity::hausdorff_star, quantity::packing,
      quantity::packing_star,   quantity::box_lower,      quantity::box_upper,
      quantity::box_lower_star, quantity::box_upper_star, quantity::quant_lower,
      quantity::quant_upper};
  return names;
}

const char* to_string(ArrowStatus status) {
  switch (status) {
    case ArrowStatus::holds:
      return "holds";
    case ArrowStatus::violated:
      return "violated";
    case ArrowStatus::skipped_heuristic:
      return "skipped-heuristic";
    case ArrowStatus::skipped_unavailable:
      return "skipped-unavailable";
  }
  return "unknown";
}

const std::vector<Arrow>& theorem_arrows() {
  using namespace quantity;
  const auto ineq = ArrowKind::inequality;
  const auto eq = ArrowKind::equality;
  static const std::vector<Arrow> arrows = {
      {"a", hausdorff, box_lower, ineq},
      {"b", box_lower, quant_lower, ineq},
      {"c", packing, box_upper, ineq},
      {"d", box_upper, quant_upper, ineq},
      {"e", hausdorff_star, quant_lower, ineq},
      {"f", quant_lower, box_lower_star, ineq},
      {"g", packing_star, quant_upper, ineq},
      {"h", quant_upper, box_upper_star, ineq},
      {"A1", hausdorff, packing, ineq},
      {"A2", packing, box_upper, ineq},
      {"A3", hausdorff, box_lower, ineq},
      {"A4", box_lower, box_upper, ineq},
      {"A5", hausdorff_star, packing_star, ineq},
      {"A6", packing_star, box_upper_star, ineq},
      {"A7", hausdorff_star, box_lower_star, ineq},
      {"A8", box_lower_star, box_upper_star, ineq},
      {"B1", hausdorff, hausdorff, eq, true},
      {"B2", hausdorff_star, hausdorff_star, eq, true},
      {"B3", packing, packing, eq, true},
      {"B4", packing_star, packing_star, eq, true},
  };
  return arrows;
}

TheoremReport grade_quantities(const QuantityMap& quantities, const QuantityMap& oracle,
                               double tolerance) {
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
  TheoremReport report;
  report.tolerance = tolerance;
  for (const Arrow& arrow : theorem_arrows()) {
    ArrowResult r;
    r.arrow = arrow;
    const QuantityMap& right_source = arrow.rhs_is_oracle ? oracle : quantities;
    const auto l = quantities.find(arrow.lhs);
    const auto rt = right_source.find(arrow.rhs);
    if (l == quantities.end() || rt == right_source.end()) {
      r.status = ArrowStatus::skipped_unavailable;
      ++report.skipped;
      report.arrows.push_back(r);
      continue;
    }
    const ScaleEstimate& lhs = l->second;
    const ScaleEstimate& rhs = rt->second;
    r.lhs_lower = lhs.lower;
    r.lhs_upper = lhs.upper;
    r.rhs_lower = rhs.lower;
    r.rhs_upper = rhs.upper;
    r.margin = rhs.upper - lhs.lower + tolerance;
    if (arrow.kind == ArrowKind::equality) {
      r.margin = std::min(r.margin, lhs.upper - rhs.lower + tolerance);
    }
    // An upper-bound-only value may only sit where overestimation is harmless.
    const bool wrong_direction = rhs.heuristic_upper_bound ||
                                 (arrow.kind == ArrowKind::equality && lhs.heuristic_upper_bound);
    if (wrong_direction) {
      r.status = ArrowStatus::skipped_heuristic;
      ++report.skipped;
    } else if (r.margin < 0.0) {
      r.status = ArrowStatus::violated;
      ++report.violations;
    } else {
      r.status = ArrowStatus::holds;
    }
    report.arrows.push_back(r);
  }
  return report;
}

std::string render_table(const TheoremReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-5s %-16s %-22s %10s %10s %10s  %s\n", "arrow", "lhs", "rhs",
                "lhs.lower", "rhs.upper", "margin", "status");
  out += line;
  for (const auto& r : report.arrows) {
    const std::string rhs = r.arrow.rhs_is_oracle ? "oracle:" + r.arrow.rhs : r.arrow.rhs;
    std::snprintf(line, sizeof line, "%-5s %-16s %-22s %10.4f %10.4f %10.4f  %s\n",
                  r.arrow.name.c_str(), r.arrow.lhs.c_str(), rhs.c_str(), r.lhs_lower,
                  r.rhs_upper, r.margin, to_string(r.status));
    out += line;
  }
  std::snprintf(line, sizeof line, "tolerance %.3g, %zu violated, %zu skipped\n", report.tolerance,
                report.violations, report.skipped);
  out += line;
  return out;
}

}  // namespace scales
