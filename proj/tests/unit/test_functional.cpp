#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "scales/errors.hpp"
#include "scales/functional.hpp"

using namespace scales;

namespace {

// Lattice functions on the step-eps grid of [0,1] with values in eps*Z ∩ [-1,1]
// and increments in {-eps, 0, eps}, counted by enumerating every value vector.
double brute_force_count(int steps) {
  const int levels = 2 * steps + 1;
  const int points = steps + 1;
  std::vector<int> v(points, 0);
  double count = 0;
  std::function<void(int)> rec = [&](int i) {
    if (i == points) {
      for (int k = 1; k < points; ++k) {
        if (std::abs(v[k] - v[k - 1]) > 1) return;
      }
      ++count;
      return;
    }
    for (int x = 0; x < levels; ++x) {
      v[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

const FunctionClassSpec lipschitz{1, 0, 1.0};

}  // namespace

TEST_CASE("bump") {
  CHECK(bump(1.0, 0.5) == doctest::Approx(1.0));
  CHECK(bump(1.0, 0.0) == 0.0);
  CHECK(bump(1.0, 0.25) == doctest::Approx(0.75));
  CHECK(bump(2.5, 1.0) == 0.0);
}

TEST_CASE("holder seminorm") {
  const auto phi = sample_grid(0x1.0p-12, [](double t) { return bump(1.0, t); });
  CHECK(holder_seminorm(phi, 0, 1.0) == doctest::Approx(4.0).epsilon(2.5e-4));
  const auto flat = sample_grid(0.125, [](double) { return 0.3; });
  CHECK(holder_seminorm(flat, 0, 1.0) == 0.0);
  const auto id = sample_grid(0.125, [](double t) { return t; });
  CHECK(holder_seminorm(id, 0, 1.0) == doctest::Approx(1.0));
  CHECK(holder_seminorm(id, 0, 0.5) == doctest::Approx(1.0));
  const auto sq = sample_grid(0x1.0p-8, [](double t) { return t * t; });
  CHECK(holder_seminorm(sq, 1, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(sample_grid(0.3, [](double t) { return t; }), DomainError);
}

TEST_CASE("embedding constants") {
  CHECK(embedding_base(lipschitz) == 6);
  CHECK(embedding_base({1, 1, 1.0}) == 3);
  CHECK(bump_norm(lipschitz) == doctest::Approx(4.0).epsilon(1e-4));
  const double e1 = 6.0 / (std::numbers::pi * std::numbers::pi * 6.0 * bump_norm(lipschitz));
  CHECK(level_scale(lipschitz, 1) == doctest::Approx(e1));
  CHECK_THROWS_AS(embedding_base({2, 0, 1.0}), DomainError);
}

TEST_CASE("embedding of labels") {
  const double h = 0x1.0p-12;
  const auto zero = zero_labels(lipschitz, 3);
  CHECK(zero.levels[2].size() == 216);
  for (double v : embed(zero, lipschitz, h).values) CHECK(v == 0.0);

  auto one = zero;
  one.levels[0][2] = 1;
  const auto s = verify_separation(zero, zero, lipschitz, h);
  CHECK(s.lhs == 0.0);
  CHECK(s.rhs == 0.0);
  CHECK(s.ok);
  const auto t = verify_separation(zero, one, lipschitz, h);
  CHECK(t.first_level == 1);
  CHECK(t.lhs >= 0.5 * level_scale(lipschitz, 1));
  const auto id = single_level_identity(zero, one, lipschitz, h);
  CHECK(id.ok);
  CHECK(id.expected == doctest::Approx(level_scale(lipschitz, 1)));

  auto two = one;
  two.levels[1][0] = -1;
  CHECK_THROWS_AS(single_level_identity(zero, two, lipschitz, h), DomainError);
  auto bad = zero;
  bad.levels[0][0] = 2;
  CHECK_THROWS_AS(embed(bad, lipschitz, h), DomainError);
  CHECK_THROWS_AS(zero_labels(lipschitz, 8), SizeError);
}

TEST_CASE("random label pairs") {
  const auto [a, b] = random_label_pair(lipschitz, 3, 4, 17);
  const auto [c, d] = random_label_pair(lipschitz, 3, 4, 17);
  CHECK(a.levels == c.levels);
  CHECK(b.levels == d.levels);
  const auto s = verify_separation(a, b, lipschitz, 0x1.0p-12);
  CHECK(s.first_level >= 1);
  for (std::size_t n = 1; n < s.first_level; ++n) CHECK(a.levels[n - 1] == b.levels[n - 1]);
  CHECK(s.ok);
}

TEST_CASE("lipschitz net counts match enumeration") {
  for (int steps : {1, 2, 4}) {
    INFO(steps);
    const auto c = lipschitz_net_count(1.0 / steps);
    CHECK(std::exp(c.log_count) == doctest::Approx(brute_force_count(steps)).epsilon(1e-12));
  }
  CHECK(std::exp(lipschitz_net_count(1.0).log_count) == doctest::Approx(7.0));
  CHECK_THROWS_AS(lipschitz_net_count(0.3), DomainError);
}

TEST_CASE("lipschitz order") {
  std::vector<double> eps;
  for (int k = 3; k <= 12; ++k) eps.push_back(std::ldexp(1.0, -k));
  const auto ord = lipschitz_order_estimate(eps, 3);
  CHECK(ord.lower >= 0.85);
  CHECK(ord.upper <= 1.15);
  // Exponential growth: the dimension-family ratio keeps increasing.
  const auto dim = lipschitz_order_estimate(eps, 3, {1, 1});
  CHECK(dim.sequence.back() > dim.sequence.front());
  CHECK(std::isfinite(lipschitz_order_estimate(eps, 2).lower));
}
