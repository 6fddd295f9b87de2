#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "scales/errors.hpp"
#include "scales/measure.hpp"
#include "scales/product_space.hpp"

using namespace scales;

namespace {

std::shared_ptr<const FiniteMetricSpace> line(std::size_t n) {
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i)});
  return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
}

std::vector<double> dyadic(double start, int count) {
  std::vector<double> eps;
  for (int k = 0; k < count; ++k) eps.push_back(std::ldexp(start, -k));
  return eps;
}

}  // namespace

TEST_CASE("measure construction") {
  const auto s = line(3);
  CHECK_THROWS_AS(EmpiricalMeasure(s, {1, -1, 1}), DomainError);
  CHECK_THROWS_AS(EmpiricalMeasure(s, {0, 0, 0}), DomainError);
  CHECK_THROWS_AS(EmpiricalMeasure(s, {1, 1}), DomainError);
  const EmpiricalMeasure mu(s, {1, 0, 3});
  CHECK(mu.total_mass() == 4.0);
  CHECK(mu.support() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("local_mass") {
  const auto mu = EmpiricalMeasure::uniform(line(5));
  CHECK(local_mass(mu, 2, 1.1) == doctest::Approx(0.6));
  CHECK(local_mass(mu, 0, 10.0) == doctest::Approx(mu.total_mass()));
  const EmpiricalMeasure weighted(line(3), {0, 1, 1});
  CHECK(local_mass(weighted, 0, 0.5) == 0.0);
}

TEST_CASE("quantization cost and best n-median") {
  const auto mu = EmpiricalMeasure::uniform(line(5));
  CHECK(quantization_cost(mu, {2}) == doctest::Approx(1.2));
  CHECK(quantization_cost(mu, {0, 1, 2, 3, 4}) == 0.0);
  CHECK(quantization_cost(mu, {1, 3}) == doctest::Approx(0.6));

  auto best = best_n_median(mu, 1);
  CHECK(best.exact);
  CHECK(best.centers == std::vector<std::size_t>{2});
  CHECK(best.cost == doctest::Approx(1.2));
  CHECK(best_n_median(mu, 5).cost == 0.0);
  CHECK(best_n_median(mu, 3).cost == doctest::Approx(0.4));

  CHECK(quantization_number(mu, 1.2).n == 1);
  CHECK(quantization_number(mu, 4.0).n == 1);
  const auto q = quantization_number(mu, 0.5);
  CHECK(q.n == 3);
  CHECK(q.exact);
}

TEST_CASE("heuristic n-median is seeded") {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({std::sin(i * 1.7) * 3.0, std::cos(i * 0.3) * 2.0});
  const auto s = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
  const auto mu = EmpiricalMeasure::uniform(s);
  QuantizerOptions o;
  o.seed = 11;
  o.exhaustive_limit = 10;
  const auto a = best_n_median(mu, 6, o);
  const auto b = best_n_median(mu, 6, o);
  CHECK_FALSE(a.exact);
  CHECK(a.centers == b.centers);
  CHECK(a.cost == b.cost);
  CHECK(a.cost == doctest::Approx(quantization_cost(mu, a.centers)));
  // Never worse than the exhaustive optimum by construction, and close on this instance.
  o.exhaustive_limit = 1e8;
  const auto exact = best_n_median(mu, 3, o);
  o.exhaustive_limit = 10;
  CHECK(best_n_median(mu, 3, o).cost <= exact.cost * 1.05);
}

TEST_CASE("mass escape") {
  const auto mu = EmpiricalMeasure::uniform(line(5));
  const auto q = best_n_median(mu, 1);
  auto e = mass_escape_check(mu, q, 3.0);
  CHECK(e.escaped_mass == 0.0);
  CHECK(e.bound == doctest::Approx(0.4));
  CHECK(e.ok);
  e = mass_escape_check(mu, q, 1.5);
  CHECK(e.escaped_mass == doctest::Approx(0.4));
  CHECK(e.bound == doctest::Approx(0.8));
  CHECK(e.ok);
  e = mass_escape_check(mu, q, 0.5);
  CHECK(e.escaped_mass == doctest::Approx(0.8));
  CHECK(e.bound == doctest::Approx(2.4));
  CHECK(e.ok);
}

TEST_CASE("weighted percentile") {
  CHECK(weighted_percentile({{3, 1}, {1, 1}, {2, 1}, {4, 1}}, 0.5) == 2.0);
  CHECK(weighted_percentile({{1, 0.1}, {5, 0.9}}, 0.05) == 1.0);
  CHECK(weighted_percentile({{1, 0.1}, {5, 0.9}}, 0.2) == 5.0);
}

TEST_CASE("local scale of a uniform interval sample") {
  const auto pts = uniform_cube_sample(4096, 1, 0);
  const auto s = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_points(pts));
  const auto mu = EmpiricalMeasure::uniform(s);
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < pts.size(); ++i) order.push_back({pts[i][0], i});
  std::nth_element(order.begin(), order.begin() + 2048, order.end());
  const std::size_t median = order[2048].second;
  LocalScaleOptions o;
  o.form = RatioForm::regression;
  const auto est = local_scale(mu, median, {1, 1}, dyadic(0.5, 6), o);
  CHECK(est.lower >= 0.8);
  CHECK(est.upper <= 1.2);
  CHECK(est.extra.count("threshold_lower") == 1);
}

TEST_CASE("Dirac measures have zero scales") {
  const auto mu = EmpiricalMeasure::dirac(line(6), 2);
  const auto est = local_scale(mu, 2, {1, 1}, dyadic(0.5, 5));
  CHECK(est.lower == 0.0);
  CHECK(est.upper == 0.0);
  CHECK_FALSE(est.degenerate);
  const auto report = measure_scale_report(mu, {1, 1}, dyadic(0.5, 5));
  for (const auto& [name, q] : report.quantities) {
    INFO(name);
    CHECK(q.lower == 0.0);
    CHECK(q.upper == 0.0);
  }
  CHECK(report.arrows.violations == 0);
}

TEST_CASE("report on a binary product is near the closed form") {
  const auto spec = ProductSpaceSpec::constant(2, 8);
  const auto z = materialize(spec, 8);
  std::vector<double> eps;
  for (int n = 1; n <= 8; ++n) eps.push_back(std::exp(-n));
  const auto report = measure_scale_report(z.measure, {2, 1}, eps);
  const auto oracle = oracle_ratio_sequence(spec, {2, 1}, 8);
  const double lo = *std::min_element(oracle.end() - 3, oracle.end());
  const double hi = *std::max_element(oracle.end() - 3, oracle.end());
  CHECK(report.errors.empty());
  for (const auto& [name, q] : report.quantities) {
    INFO(name);
    CHECK(q.lower >= lo - 0.15);
    CHECK(q.upper <= hi + 0.15);
  }
}
