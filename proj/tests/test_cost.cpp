#include <cmath>
#include <random>

#include <doctest.h>

#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/rational.hpp"
#include "mmot/reference_example.hpp"
#include "mmot/simplex.hpp"

#include "test_support.hpp"

using namespace mmot;
using mmot_test::make_instance;

// Braced lists alone are ambiguous between the double and Rational overloads.
using Pts = std::vector<std::vector<double>>;

TEST_CASE("pairwise cost on hand-computed tuples") {
  CHECK(pairwise_cost(Pts{{0.0, 0.0}, {3.0, 4.0}}) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(pairwise_cost(Pts{{1.5, -2.0}, {1.5, -2.0}, {1.5, -2.0}}) == doctest::Approx(0.0));

  // Tuple (1,1,3) of the reference example, recomputed pair by pair by hand:
  // |x1-x2|^2 + |x1-x3|^2 + |x2-x3|^2.
  const Instance ref = reference_example();
  const std::vector<std::vector<double>> tuple = {ref.marginals[0].points[0],
                                                  ref.marginals[1].points[0],
                                                  ref.marginals[2].points[2]};
  CHECK(pairwise_cost(tuple) == doctest::Approx(mmot_test::kRefCost002).epsilon(1e-14));
}

TEST_CASE("pairwise cost rejects mixed dimensions") {
  CHECK_THROWS_AS(pairwise_cost(Pts{{0.0, 0.0}, {1.0}}), DimensionMismatch);
}

TEST_CASE("negsum cost on hand-computed tuples") {
  CHECK(negsum_cost(Pts{{1.0, 0.0}, {-1.0, 0.0}}) == doctest::Approx(0.0));
  CHECK(negsum_cost(Pts{{3.0, 4.0}}) == doctest::Approx(-25.0).epsilon(1e-15));
  CHECK(negsum_cost(Pts{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}) ==
        doctest::Approx(-9.0).epsilon(1e-15));
}

TEST_CASE("pairwise = N * sum of squared norms + negsum, pointwise") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 2 + static_cast<int>(rng() % 4);
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<double>> points(N, std::vector<double>(d));
    double norms = 0.0;
    for (auto& p : points)
      for (double& c : p) {
        c = coord(rng);
        norms += c * c;
      }
    const double lhs = pairwise_cost(points);
    const double rhs = N * norms + negsum_cost(points);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("build_tensor enumerates all tuples row-major") {
  const auto instance = make_instance({{{0.0}, {1.0}}, {{2.0}, {3.0}}});
  const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
  REQUIRE(tensor.values.size() == 4);
  // (1,1) (1,2) (2,1) (2,2) in row-major order with the first index slowest
  CHECK(tensor.values[0] == doctest::Approx(4.0));   // |0-2|^2
  CHECK(tensor.values[1] == doctest::Approx(9.0));   // |0-3|^2
  CHECK(tensor.values[2] == doctest::Approx(1.0));   // |1-2|^2
  CHECK(tensor.values[3] == doctest::Approx(4.0));   // |1-3|^2
  CHECK(tensor.at({1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("reference tensor has 27 entries with the frozen corner value") {
  const auto tensor = build_tensor(reference_example(), CostConvention::PairwiseUnordered);
  REQUIRE(tensor.values.size() == 27);
  CHECK(tensor.at({0, 0, 2}) == doctest::Approx(mmot_test::kRefCost002).epsilon(1e-14));
  for (double v : tensor.values) CHECK(v >= 0.0);
}

TEST_CASE("build_tensor enforces the entry cap") {
  const auto instance = make_instance(
      {{{0.0}, {1.0}, {2.0}}, {{0.0}, {1.0}, {2.0}}, {{0.0}, {1.0}, {2.0}}});
  CHECK_THROWS_AS(build_tensor(instance, CostConvention::PairwiseUnordered, 10), SizeOverflow);
}

TEST_CASE("exact tensor agrees with the float tensor") {
  const auto instance = reference_example();
  const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
  const auto exact = build_tensor_exact(instance, CostConvention::PairwiseUnordered);
  REQUIRE(exact.values.size() == tensor.values.size());
  for (std::size_t f = 0; f < tensor.values.size(); ++f)
    CHECK(to_double(exact.values[f]) == doctest::Approx(tensor.values[f]).epsilon(1e-14));

  // Entry (1,1,3) recomputed independently in rational arithmetic.
  const std::vector<std::vector<Rational>> tuple = {
      to_rational(instance.marginals[0].points[0]), to_rational(instance.marginals[1].points[0]),
      to_rational(instance.marginals[2].points[2])};
  CHECK(exact.at({0, 0, 2}) == pairwise_cost(tuple));
}

TEST_CASE("optimal support is invariant under per-marginal translation") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  auto instance = make_instance({{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}},
                                 {{coord(rng), coord(rng)}, {coord(rng), coord(rng)}},
                                 {{coord(rng), coord(rng)}, {coord(rng), coord(rng)}}});
  const auto base = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));

  auto shifted = instance;
  const std::vector<std::vector<double>> shifts = {{10.0, -3.0}, {-7.5, 0.25}, {2.0, 2.0}};
  for (int i = 0; i < 3; ++i)
    for (auto& point : shifted.marginals[i].points)
      for (int j = 0; j < 2; ++j) point[j] += shifts[i][j];
  const auto moved = solve_lp(shifted, build_tensor(shifted, CostConvention::PairwiseUnordered));

  REQUIRE(base.coupling.entries.size() == moved.coupling.entries.size());
  auto it = moved.coupling.entries.begin();
  for (const auto& [tuple, weight] : base.coupling.entries) {
    CHECK(tuple == it->first);
    CHECK(weight == doctest::Approx(it->second).epsilon(1e-9));
    ++it;
  }
}
