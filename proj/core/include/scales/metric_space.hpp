#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scales {

enum class Norm { euclidean, sup };

class FiniteMetricSpace {
 public:
  // Triangle-inequality validation is O(n^3); it runs when requested and the
  // space has at most triangle_check_limit points.
  static constexpr std::size_t triangle_check_limit = 512;

  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist,
                    bool check_triangle = true);

  static FiniteMetricSpace from_points(const std::vector<std::vector<double>>& points,
                                       Norm norm = Norm::euclidean,
                                       std::vector<std::string> labels = {});

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  const double* row(std::size_t i) const { return dist_.data() + i * n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool triangle_checked() const { return triangle_checked_; }

  double diameter() const;
  double min_positive_distance() const;

  // Sorted distinct pairwise distances (excluding 0).
  std::vector<double> distinct_distances() const;

  FiniteMetricSpace subspace(const std::vector<std::size_t>& indices) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  bool triangle_checked_ = false;
};

struct PointTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;
  std::optional<std::vector<double>> weights;
};

// Square matrix with a header row of labels. A leading label column is
// accepted when every data row has n + 1 fields.
FiniteMetricSpace load_distance_matrix_csv(const std::string& path);

// One point per row. An optional header row names the columns; a column
// called "weight" is read as point weights, a column called "label" as labels.
PointTable load_points_csv(const std::string& path);

// n points drawn uniformly from [0,1]^dim; point i uses its own counter
// stream, so the sample does not depend on how work is scheduled.
std::vector<std::vector<double>> uniform_cube_sample(std::size_t n, std::size_t dim,
                                                     std::uint64_t seed);

}  // namespace scales
