#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scales/measure.hpp"
#include "scales/metric_space.hpp"

namespace scales {

// n_paths Brownian paths on the grid t_i = i/m, stored row-major with B_0 = 0.
struct PathEnsemble {
  std::size_t m = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  const double* path(std::size_t i) const { return values.data() + i * (m + 1); }
};

inline constexpr std::size_t default_memory_cap = std::size_t{2} << 30;

// Increments are N(0, 1/m) from Philox keyed by the seed, with counter
// (step pair, path, stream tag); any thread layout yields the same paths.
PathEnsemble sample_paths(std::size_t m, std::size_t n_paths, std::uint64_t seed,
                          std::size_t memory_cap = default_memory_cap);

// Per-path max |B_t| over the grid points that are multiples of each stride,
// computed without storing the paths. Same paths as sample_paths.
struct PathMaxima {
  std::size_t m = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> strides;
  std::vector<std::vector<double>> max_abs;  // [stride index][path]
};

PathMaxima sample_path_maxima(std::size_t m, std::size_t n_paths, std::uint64_t seed,
                              const std::vector<std::size_t>& strides = {1});
PathMaxima path_maxima(const PathEnsemble& ensemble, const std::vector<std::size_t>& strides = {1});

// P(sup_{[0,1]} |B_t| <= eps) from the theta series
// (4/pi) sum_j (-1)^j/(2j+1) exp(-(2j+1)^2 pi^2 / (8 eps^2)).
double smallball_series(double eps);

struct SmallBallEstimate {
  double p_hat = 0.0;
  double stderr_ = 0.0;
  std::size_t hits = 0;
  std::size_t n = 0;
};

SmallBallEstimate smallball_mc(const PathEnsemble& ensemble, double eps);
SmallBallEstimate smallball_mc(const PathMaxima& maxima, double eps, std::size_t stride_index = 0);

// Discretisation allowance from a coarser grid on the same paths: the bias of
// the discrete maximum scales like m^{-1/2}, so p(m/4) - p(m) estimates the
// bias at m itself.
struct RefinementAllowance {
  double coarse = 0.0;
  double fine = 0.0;
  double diff_stderr = 0.0;
  double allowance = 0.0;  // (coarse - fine) + 3 * diff_stderr
};

RefinementAllowance refinement_allowance(const PathMaxima& maxima, double eps,
                                         std::size_t fine_index, std::size_t coarse_index);

enum class FitModel { power_law, power_law_offset };

struct OrderFit {
  FitModel model = FitModel::power_law;
  double gamma = 0.0;
  double kappa_hat = 0.0;
  double offset = 0.0;
  double rss = 0.0;
};

// power_law: least squares of log(-log p) against log(1/eps).
// power_law_offset: -log p = kappa eps^{-gamma} + offset, gamma profiled.
OrderFit smallball_order_fit(std::span<const double> eps, std::span<const double> probs,
                             FitModel model = FitModel::power_law);

FiniteMetricSpace sup_distance_space(const PathEnsemble& ensemble);

struct PathQuantizationTrend {
  std::vector<double> eps;
  std::vector<double> count;
  std::vector<bool> exact;
  std::vector<double> scaled_log;  // eps^2 log Q
  bool nonincreasing = false;
  bool scaled_increasing = false;  // as eps decreases
};

PathQuantizationTrend path_quantization_trend(const PathEnsemble& ensemble,
                                              std::span<const double> eps_list,
                                              const QuantizerOptions& options = {});

// Raw little-endian file: m, n_paths, seed as uint64, then the values as f64.
// A JSON sidecar with the same fields is written next to it.
void save_ensemble(const PathEnsemble& ensemble, const std::string& path);
PathEnsemble load_ensemble(const std::string& path);

}  // namespace scales
