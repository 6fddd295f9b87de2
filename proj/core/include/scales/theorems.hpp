#pragma once

#include <map>
#include <string>
#include <vector>

#include "scales/scale_estimate.hpp"

namespace scales {

// Names of the ten measure scales.
namespace quantity {
inline const std::string hausdorff = "hausdorff";
inline const std::string hausdorff_star = "hausdorff_star";
inline const std::string packing = "packing";
inline const std::string packing_star = "packing_star";
inline const std::string box_lower = "box_lower";
inline const std::string box_upper = "box_upper";
inline const std::string box_lower_star = "box_lower_star";
inline const std::string box_upper_star = "box_upper_star";
inline const std::string quant_lower = "quant_lower";
inline const std::string quant_upper = "quant_upper";
}  // namespace quantity

const std::vector<std::string>& quantity_names();

using QuantityMap = std::map<std::string, ScaleEstimate>;

enum class ArrowKind { inequality, equality };
enum class ArrowStatus { holds, violated, skipped_heuristic, skipped_unavailable };

const char* to_string(ArrowStatus status);

struct Arrow {
  std::string name;
  std::string lhs;
  std::string rhs;
  ArrowKind kind = ArrowKind::inequality;
  bool rhs_is_oracle = false;
};

// (a)..(h) of the measure comparison theorem, then the set-level chain
// A1..A8, then the local-scale characterisations B1..B4 (graded against
// oracle values when they exist).
const std::vector<Arrow>& theorem_arrows();

struct ArrowResult {
  Arrow arrow;
  double lhs_lower = 0.0;
  double lhs_upper = 0.0;
  double rhs_lower = 0.0;
  double rhs_upper = 0.0;
  double margin = 0.0;
  ArrowStatus status = ArrowStatus::skipped_unavailable;
};

struct TheoremReport {
  double tolerance = 0.0;
  std::vector<ArrowResult> arrows;
  std::size_t violations = 0;
  std::size_t skipped = 0;
};

TheoremReport grade_quantities(const QuantityMap& quantities, const QuantityMap& oracle,
                               double tolerance);

std::string render_table(const TheoremReport& report);

}  // namespace scales
