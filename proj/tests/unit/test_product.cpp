#include <doctest.h>

#include <cmath>
#include <vector>

#include "scales/covering.hpp"
#include "scales/errors.hpp"
#include "scales/product_space.hpp"

using namespace scales;

TEST_CASE("exact covering and ball masses") {
  const auto two = ProductSpaceSpec::constant(2, 5);
  CHECK(exact_covering_log(two, 3) == doctest::Approx(std::log(8.0)));
  CHECK(exact_covering_log(two, 0) == 0.0);
  CHECK(exact_ball_mass_log(two, 3) == doctest::Approx(-std::log(8.0)));
  CHECK(exact_ball_mass_log(two, 0) == 0.0);
  CHECK(exact_covering_log(ProductSpaceSpec::constant(5, 1), 1) == doctest::Approx(std::log(5.0)));
  const auto mixed = ProductSpaceSpec::from_log_cards({std::log(3.0), std::log(4.0)}, {-1, -2});
  CHECK(exact_ball_mass_log(mixed, 2) == doctest::Approx(-std::log(12.0)));
  CHECK_THROWS_AS(exact_covering_log(two, 6), RangeError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(ProductSpaceSpec::from_log_cards({std::log(2.0)}, {-1, -2}), DomainError);
  CHECK_THROWS_AS(ProductSpaceSpec::from_log_cards({std::log(2.0), std::log(2.0)}, {-2, -1}),
                  DomainError);
  // log eps_{n+1} / log eps_n must stay within [0.5, 2].
  CHECK_THROWS_AS(ProductSpaceSpec::from_log_cards({std::log(2.0), std::log(2.0)}, {-1, -5}),
                  DomainError);
  CHECK_THROWS_AS(ProductSpaceSpec::from_log_cards({0.0}, {-1}), DomainError);
}

TEST_CASE("lambda sequence") {
  std::vector<double> log_cards, log_eps;
  for (int k = 1; k <= 30; ++k) {
    log_cards.push_back(std::exp(k));
    log_eps.push_back(-k);
  }
  const auto spec = ProductSpaceSpec::from_log_cards(log_cards, log_eps);
  const auto lambda = lambda_sequence(spec, std::exp(1.0), 30);
  // log(sum_{k<=30} e^k) / 30 = (30 + log(1 / (1 - e^-1)) + log(1 - e^-30)) / 30.
  const double expected = (30.0 - std::log(1.0 - std::exp(-1.0)) + std::log1p(-std::exp(-30.0))) / 30.0;
  CHECK(lambda[29] == doctest::Approx(expected).epsilon(1e-12));

  const auto flat = ProductSpaceSpec::constant(std::exp(1.0), 50);
  const auto l = lambda_sequence(flat, std::exp(1.0), 50);
  CHECK(l[49] == doctest::Approx(std::log(50.0) / 50.0));
  CHECK(l[49] < 0.12);

  const auto single = ProductSpaceSpec::from_log_cards({std::exp(1.0)}, {-1});
  CHECK(lambda_sequence(single, std::exp(1.0), 1)[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(lambda_sequence(single, 1.0, 1), DomainError);
}

TEST_CASE("oracle ratios of the binary product") {
  const auto spec = ProductSpaceSpec::constant(2, 12);
  const auto dim = oracle_ratio_sequence(spec, {1, 1}, 12);
  for (double r : dim) CHECK(r == doctest::Approx(std::log(2.0)));
  const auto ord = oracle_ratio_sequence(spec, {2, 1}, 12);
  CHECK(ord[11] == doctest::Approx(std::log(12.0 * std::log(2.0)) / 12.0));
  CHECK(ord[0] == doctest::Approx(std::log(std::log(2.0))));
}

TEST_CASE("inhomogeneous spec") {
  const auto spec = inhomogeneous_spec(2, 1, 40);
  REQUIRE(spec.params());
  CHECK(spec.params()->c == 3);
  // Small factors are floored: Card Z_1 = floor(e^e) = 15.
  CHECK(spec.log_log_card(1) == doctest::Approx(std::log(std::log(15.0))));
  CHECK(spec.log_log_card(2) == doctest::Approx(2.0).epsilon(1e-3));
  for (int k = 3; k <= 8; ++k) CHECK(spec.log_log_card(k) == doctest::Approx(2.0 * k));
  CHECK(spec.log_log_card(9) == doctest::Approx(9.0));
  CHECK(spec.log_log_card(27) == doctest::Approx(54.0));
  CHECK(inhomogeneous_spec(2.5, 1, 10).params()->c == 3);
  CHECK(inhomogeneous_spec(1, 1, 10).params()->c == 2);
  const auto flat = inhomogeneous_spec(1, 1, 10);
  for (int k = 1; k <= 10; ++k) CHECK(flat.log_log_card(k) == doctest::Approx(k).epsilon(0.01));
  CHECK_THROWS_AS(inhomogeneous_spec(1, 2, 10), DomainError);
}

TEST_CASE("inhomogeneous orders") {
  const auto spec = inhomogeneous_spec(2, 1, 2187);
  const auto b = inhomogeneous_orders(spec, 2187);
  CHECK(std::abs(b.lower - 1.0) <= 0.15);
  CHECK(std::abs(b.upper - 2.0) <= 0.15);
  const auto flat = inhomogeneous_spec(1, 1, 128);
  const auto f = inhomogeneous_orders(flat, 128);
  CHECK(std::abs(f.lower - 1.0) <= 0.05);
  CHECK(std::abs(f.upper - 1.0) <= 0.05);
  CHECK_THROWS_AS(inhomogeneous_orders(inhomogeneous_spec(2, 1, 100), 100), DepthError);
  CHECK_THROWS_AS(inhomogeneous_orders(ProductSpaceSpec::constant(2, 800), 800), DomainError);
}

TEST_CASE("materialize") {
  const auto z = materialize(ProductSpaceSpec::constant(2, 3), 3);
  CHECK(z.space->size() == 8);
  CHECK((*z.space)(0, 1) == doctest::Approx(std::exp(-3.0)));
  CHECK((*z.space)(0, 4) == doctest::Approx(std::exp(-1.0)));
  const auto t = materialize(ProductSpaceSpec::constant(3, 1), 1);
  CHECK(t.space->size() == 3);
  CHECK((*t.space)(1, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(materialize(ProductSpaceSpec::constant(2, 15), 15), SizeError);
}

TEST_CASE("covers of the materialized product are exact") {
  const auto spec = ProductSpaceSpec::constant(2, 10);
  const auto z = materialize(spec, 10);
  for (std::size_t n = 1; n <= 10; ++n) {
    const double eps = std::exp(spec.log_eps(n));
    CHECK(covering_number_greedy(*z.space, eps) == (std::size_t{1} << n));
    CHECK(std::log(local_mass(z.measure, 17, eps)) == doctest::Approx(exact_ball_mass_log(spec, n)));
  }
}
