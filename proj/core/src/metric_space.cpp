#include "scales/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scales/errors.hpp"
#include "scales/parallel.hpp"
#include "scales/rng.hpp"

namespace scales {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist,
                                     bool check_triangle)
    : n_(labels.size()), labels_(std::move(labels)), dist_(std::move(dist)) {
  if (n_ == 0) throw DomainError("metric space must be non-empty");
  if (dist_.size() != n_ * n_) throw DomainError("distance matrix is not square");
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw DomainError("distance matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = (*this)(i, j);
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw DomainError("distances must be finite and non-negative");
      }
      if (d != (*this)(j, i)) throw DomainError("distance matrix is not symmetric");
    }
  }
  if (check_triangle && n_ <= triangle_check_limit) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double* ri = row(i);
      for (std::size_t k = 0; k < n_; ++k) {
        const double* rk = row(k);
        const double dik = ri[k];
        for (std::size_t j = 0; j < n_; ++j) {
          if (ri[j] > dik + rk[j] + 1e-9) {
            throw DomainError("triangle inequality violated at (" + std::to_string(i) + ", " +
                              std::to_string(k) + ", " + std::to_string(j) + ")");
          }
        }
      }
    }
    triangle_checked_ = true;
  }
}

FiniteMetricSpace FiniteMetricSpace::from_points(const std::vector<std::vector<double>>& points,
                                                 Norm norm, std::vector<std::string> labels) {
  const std::size_t n = points.size();
  if (n == 0) throw DomainError("point cloud must be non-empty");
  const std::size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim) throw DomainError("points have inconsistent dimensions");
  }
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  } else if (labels.size() != n) {
    throw DomainError("label count does not match point count");
  }
  std::vector<double> dist(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = std::abs(points[i][c] - points[j][c]);
        acc = norm == Norm::sup ? std::max(acc, diff) : acc + diff * diff;
      }
      dist[i * n + j] = norm == Norm::sup ? acc : std::sqrt(acc);
    }
  });
  // Euclidean and sup metrics satisfy the triangle inequality by construction.
  return FiniteMetricSpace(std::move(labels), std::move(dist), false);
}

double FiniteMetricSpace::diameter() const {
  return *std::max_element(dist_.begin(), dist_.end());
}

double FiniteMetricSpace::min_positive_distance() const {
  double best = INFINITY;
  for (double d : dist_) {
    if (d > 0.0 && d < best) best = d;
  }
  return best;
}

std::vector<double> FiniteMetricSpace::distinct_distances() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) out.push_back((*this)(i, j));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), 0.0), out.end());
  return out;
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<std::size_t>& indices) const {
  const std::size_t m = indices.size();
  std::vector<std::string> labels;
  std::vector<double> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    if (indices[a] >= n_) throw IndexError("subspace index out of range");
    labels.push_back(labels_[indices[a]]);
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = (*this)(indices[a], indices[b]);
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist), false);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw IoError(path + " contains no rows");
  return rows;
}

double field_value(const std::string& s, const std::string& path, std::size_t row) {
  double v = 0.0;
  if (!parse_double(s, v)) {
    throw IoError(path + ": non-numeric field '" + s + "' in row " + std::to_string(row));
  }
  return v;
}

}  // namespace

FiniteMetricSpace load_distance_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  std::vector<std::string> labels = rows[0];
  const std::size_t n = labels.size();
  if (rows.size() != n + 1) throw IoError(path + ": expected " + std::to_string(n) + " data rows");
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i + 1];
    std::size_t offset = 0;
    if (r.size() == n + 1) {
      offset = 1;
    } else if (r.size() != n) {
      throw IoError(path + ": row " + std::to_string(i + 1) + " has the wrong width");
    }
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = field_value(r[j + offset], path, i + 1);
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

PointTable load_points_csv(const std::string& path) {
  auto rows = read_rows(path);
  PointTable table;

  std::size_t first_data = 0;
  long weight_col = -1;
  long label_col = -1;
  double probe = 0.0;
  bool header = false;
  for (const auto& f : rows[0]) header = header || !parse_double(f, probe);
  if (header) {
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      std::string name = rows[0][c];
      std::transform(name.begin(), name.end(), name.begin(), ::tolower);
      if (name == "weight") weight_col = static_cast<long>(c);
      if (name == "label") label_col = static_cast<long>(c);
    }
    first_data = 1;
  }
  const std::size_t width = rows[0].size();
  std::vector<double> weights;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    if (rows[r].size() != width) throw IoError(path + ": ragged row " + std::to_string(r));
    std::vector<double> point;
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<long>(c) == label_col) continue;
      const double v = field_value(rows[r][c], path, r);
      if (static_cast<long>(c) == weight_col) {
        weights.push_back(v);
      } else {
        point.push_back(v);
      }
    }
    table.labels.push_back(label_col >= 0 ? rows[r][label_col]
                                          : std::to_string(r - first_data));
    table.coords.push_back(std::move(point));
  }
  if (weight_col >= 0) table.weights = std::move(weights);
  if (table.coords.empty()) throw IoError(path + " contains no points");
  return table;
}

std::vector<std::vector<double>> uniform_cube_sample(std::size_t n, std::size_t dim,
                                                     std::uint64_t seed) {
  if (n < 1 || dim < 1) throw DomainError("cube sample needs n >= 1 and dim >= 1");
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    CounterStream rng(seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0xc0beu);
    for (double& x : points[i]) x = rng.uniform();
  }
  return points;
}

}  // namespace scales
