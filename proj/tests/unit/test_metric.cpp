#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "scales/covering.hpp"
#include "scales/errors.hpp"
#include "scales/metric_space.hpp"

using namespace scales;

namespace {

FiniteMetricSpace line(std::size_t n) {
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i)});
  return FiniteMetricSpace::from_points(pts);
}

const std::string data = SCALES_TEST_DATA;

}  // namespace

TEST_CASE("construction validates the metric") {
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b"}, {0, 1, 2, 0}), DomainError);
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b"}, {0, -1, -1, 0}), DomainError);
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b", "c"}, {0, 1, 5, 1, 0, 1, 5, 1, 0}), DomainError);
  const auto s = line(5);
  CHECK(s.diameter() == 4.0);
  CHECK(s.min_positive_distance() == 1.0);
  CHECK(s.distinct_distances() == std::vector<double>{1, 2, 3, 4});
  CHECK(s.labels()[3] == "3");
  const auto sub = s.subspace({0, 4});
  CHECK(sub(0, 1) == 4.0);
}

TEST_CASE("sup norm") {
  const auto s = FiniteMetricSpace::from_points({{0, 0}, {3, 4}}, Norm::sup);
  CHECK(s(0, 1) == 4.0);
  CHECK(FiniteMetricSpace::from_points({{0, 0}, {3, 4}})(0, 1) == 5.0);
}

TEST_CASE("covering numbers on the line") {
  const auto s = line(5);
  CHECK(covering_number_exact(s, 1.1) == 2);
  CHECK(covering_number_greedy(s, 1.1) == 2);
  CHECK(is_cover(s, minimal_cover(s, 1.1)));
  CHECK(covering_number_exact(line(1), 0.1) == 1);
  const auto pair = FiniteMetricSpace::from_points({{0}, {10}});
  CHECK(covering_number_exact(pair, 1.0) == 2);
  CHECK(covering_number_greedy(s, 4.5) == 1);
  CHECK_THROWS_AS(covering_number_exact(line(25), 1.0), SizeError);
  CHECK_THROWS_AS(covering_number_exact(s, 0.0), DomainError);
}

TEST_CASE("packing numbers on the line") {
  const auto s = line(5);
  CHECK(packing_number_exact(s, 1.1) == 3);
  CHECK(maximum_packing(s, 1.1) == std::vector<std::size_t>{0, 2, 4});
  CHECK(packing_number_exact(s, 0.5) == 5);
  CHECK(packing_number_greedy(s, 1.1) == 3);
  CHECK(greedy_packing(s, 1.1) == std::vector<std::size_t>{0, 2, 4});
  CHECK(packing_number_greedy(s, 0.5) == 5);
  CHECK(packing_number_exact(line(1), 3.0) == 1);
}

TEST_CASE("exact packing beats the index-order scan") {
  // Index order keeps 1 first and blocks both ends.
  const auto s = FiniteMetricSpace::from_points({{1}, {0}, {2}});
  CHECK(packing_number_greedy(s, 1.5) == 1);
  CHECK(packing_number_exact(s, 1.5) == 2);
}

TEST_CASE("pre-measures") {
  const auto s = line(5);
  const ScalingFamily dim{1, 1};
  auto h = hausdorff_premeasure(s, dim, 1.0, {1.1});
  CHECK(h.value == doctest::Approx(2.2));
  CHECK(h.exact);
  // One 1.1-ball over three points plus two singletons beats two large balls.
  CHECK(hausdorff_premeasure(s, dim, 1.0, {0.5, 1.1}).value == doctest::Approx(2.1));
  CHECK(hausdorff_premeasure(line(1), dim, 2.0, {0.5}).value == doctest::Approx(0.25));
  CHECK(packing_premeasure(s, dim, 1.0, {0.4}).value == doctest::Approx(2.0));
  CHECK(packing_premeasure(line(1), dim, 2.0, {0.5}).value == doctest::Approx(0.25));
  const auto pair = FiniteMetricSpace::from_points({{0}, {1}});
  CHECK(packing_premeasure(pair, dim, 1.0, {0.6}).value == doctest::Approx(0.6));
  CHECK(default_radius_menu(s, 2.5) == std::vector<double>{1, 2, 2.5});
  CHECK_THROWS_AS(hausdorff_premeasure(s, dim, 1.0, {}), DomainError);
}

TEST_CASE("csv loaders") {
  const auto m = load_distance_matrix_csv(data + "/line5.csv");
  CHECK(m.size() == 5);
  CHECK(m.labels()[1] == "b");
  CHECK(m(0, 4) == 4.0);
  const auto p = load_points_csv(data + "/weighted_line.csv");
  CHECK(p.labels == std::vector<std::string>{"p0", "p1", "p2", "p3", "p4"});
  REQUIRE(p.weights);
  CHECK((*p.weights)[2] == 2.0);
  CHECK(p.coords[3] == std::vector<double>{3.0});
  const auto r = load_points_csv(data + "/rectangle.csv");
  CHECK_FALSE(r.weights);
  CHECK(r.coords.size() == 4);
  CHECK_THROWS_AS(load_distance_matrix_csv(data + "/rectangle.csv"), IoError);
  CHECK_THROWS_AS(load_points_csv(data + "/does-not-exist.csv"), IoError);
}

TEST_CASE("cube samples are seeded and inside the cube") {
  const auto a = uniform_cube_sample(100, 3, 4);
  CHECK(a == uniform_cube_sample(100, 3, 4));
  CHECK(a != uniform_cube_sample(100, 3, 5));
  for (const auto& p : a) {
    for (double x : p) CHECK((x > 0.0 && x < 1.0));
  }
}
