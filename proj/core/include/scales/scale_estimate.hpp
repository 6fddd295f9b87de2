#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace scales {

// A (lower, upper) pair together with the sequence it was read from.
struct ScaleEstimate {
  double lower = 0.0;
  double upper = 0.0;

  std::string method;
  std::vector<double> eps;
  std::vector<double> sequence;
  std::size_t window = 0;
  double resolution = 0.0;

  bool heuristic_upper_bound = false;
  bool degenerate = false;
  int inconclusive_probes = 0;

  // Free-form numeric diagnostics (cross-checks, bracket ends, ...).
  std::map<std::string, double> extra;
};

}  // namespace scales
