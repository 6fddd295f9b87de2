#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "scales/errors.hpp"
#include "scales/parallel.hpp"
#include "scales/wiener.hpp"

using namespace scales;

TEST_CASE("small-ball series") {
  CHECK(smallball_series(0.5) == doctest::Approx(0.009157).epsilon(1e-3));
  CHECK(smallball_series(0.8) == doctest::Approx(0.18526).epsilon(1e-4));
  CHECK(smallball_series(10.0) > 0.99999);
  double prev = 0.0;
  for (double e = 0.2; e < 3.0; e += 0.1) {
    const double p = smallball_series(e);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("paths are seeded and thread independent") {
  set_thread_count(1);
  const auto a = sample_paths(64, 50, 3);
  set_thread_count(4);
  const auto b = sample_paths(64, 50, 3);
  set_thread_count(0);
  CHECK(a.values == b.values);
  CHECK(a.values != sample_paths(64, 50, 4).values);
  CHECK(a.path(7)[0] == 0.0);
  // Streaming maxima see the same paths.
  const auto m = sample_path_maxima(64, 50, 3, {1, 4});
  const auto direct = path_maxima(a, {1, 4});
  CHECK(m.max_abs == direct.max_abs);
  CHECK_THROWS_AS(sample_paths(1024, 1024, 0, 1024), SizeError);
  CHECK_THROWS_AS(sample_path_maxima(64, 10, 0, {5}), DomainError);
}

TEST_CASE("increments have variance 1/m") {
  const auto e = sample_paths(256, 400, 9);
  double sum = 0, sq = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < e.n_paths; ++i) {
    for (std::size_t t = 1; t <= e.m; ++t) {
      const double d = e.path(i)[t] - e.path(i)[t - 1];
      sum += d;
      sq += d * d;
      ++n;
    }
  }
  CHECK(std::abs(sum / n) < 4.0 * std::sqrt(1.0 / 256 / n));
  CHECK(sq / n * 256 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("monte carlo small balls") {
  const auto e = sample_paths(128, 200, 1);
  const auto all = smallball_mc(e, 1e9);
  CHECK(all.p_hat == 1.0);
  CHECK(all.stderr_ == 0.0);
  const auto m = sample_path_maxima(256, 20000, 2, {1, 4});
  const auto p = smallball_mc(m, 0.8);
  const auto ref = refinement_allowance(m, 0.8, 0, 1);
  CHECK(ref.coarse >= ref.fine);
  CHECK(std::abs(p.p_hat - smallball_series(0.8)) <= 3 * p.stderr_ + ref.allowance);
}

TEST_CASE("order fits") {
  std::vector<double> eps, probs, synthetic;
  for (double e = 0.35; e <= 0.8001; e += 0.05) {
    eps.push_back(e);
    probs.push_back(smallball_series(e));
    synthetic.push_back(std::exp(-1.0 / e));
  }
  CHECK(smallball_order_fit(eps, synthetic).gamma == doctest::Approx(1.0));
  const auto offset = smallball_order_fit(eps, probs, FitModel::power_law_offset);
  CHECK(offset.gamma == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(offset.kappa_hat == doctest::Approx(std::numbers::pi * std::numbers::pi / 8).epsilon(1e-3));
  const auto plain = smallball_order_fit(eps, probs);
  CHECK(plain.gamma > 2.0);
  CHECK_THROWS_AS(smallball_order_fit(std::vector<double>{0.5, 0.6}, std::vector<double>{0.1, 0.2}),
                  DomainError);
}

TEST_CASE("path quantization trend") {
  const auto e = sample_paths(16, 128, 7);
  const std::vector<double> eps{1.0, 0.8, 0.6};
  const auto t = path_quantization_trend(e, eps);
  CHECK(t.nonincreasing);
  CHECK(t.count.size() == 3);
  const auto space = sup_distance_space(e);
  CHECK(space.size() == 128);
}

TEST_CASE("ensemble round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "scales_ensemble_test.bin").string();
  const auto e = sample_paths(32, 10, 5);
  save_ensemble(e, path);
  const auto back = load_ensemble(path);
  CHECK(back.m == 32);
  CHECK(back.n_paths == 10);
  CHECK(back.seed == 5);
  CHECK(back.values == e.values);
  CHECK(std::filesystem::exists(path + ".json"));
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
  CHECK_THROWS_AS(load_ensemble(path), IoError);
}
