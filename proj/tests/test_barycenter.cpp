#include <cmath>
#include <vector>

#include <doctest.h>

#include "mmot/barycenter.hpp"
#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/monge.hpp"
#include "mmot/rational.hpp"
#include "mmot/reference_example.hpp"
#include "mmot/search.hpp"
#include "mmot/simplex.hpp"

#include "test_support.hpp"

using namespace mmot;
using mmot_test::make_instance;

TEST_CASE("reference example: six mean-map atoms of weight 1/6") {
  const Instance instance = reference_example();
  const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
  const auto barycenter = extract_barycenter(instance, lp.coupling);

  const auto& expected = mmot_test::ref_barycenter_atoms();
  REQUIRE(barycenter.atoms.size() == expected.size());
  for (std::size_t a = 0; a < expected.size(); ++a) {
    const auto& [point, weight] = barycenter.atoms[a];
    CHECK(weight == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    for (int j = 0; j < 2; ++j) CHECK(point[j] == doctest::Approx(expected[a][j]).epsilon(1e-9));
  }
  CHECK(barycenter.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

  // support bound N(m-1)+1
  CHECK(barycenter.atoms.size() <= 7);
}

TEST_CASE("reference example: functional value equals lp/N") {
  const Instance instance = reference_example();
  const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
  const auto barycenter = extract_barycenter(instance, lp.coupling);
  const double functional = barycenter_functional(instance, barycenter);
  CHECK(functional == doctest::Approx(mmot_test::kRefFunctional).epsilon(1e-9));
  CHECK(functional == doctest::Approx(lp.value / 3.0).epsilon(1e-10));
}

TEST_CASE("identical marginals: barycenter is the marginal itself") {
  const std::vector<std::vector<double>> points = {{0.0, 1.0}, {2.0, -1.0}, {4.0, 4.0}};
  const auto instance = make_instance({points, points, points});
  const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
  const auto barycenter = extract_barycenter(instance, lp.coupling);

  REQUIRE(barycenter.atoms.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(barycenter.atoms[a].second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (int j = 0; j < 2; ++j)
      CHECK(barycenter.atoms[a].first[j] == doctest::Approx(points[a][j]).epsilon(1e-12));
  }
  CHECK(barycenter_functional(instance, barycenter) == doctest::Approx(0.0));
}

TEST_CASE("two-point marginals: barycenter sits at the shifted +/- mean atoms") {
  GeneratorConfig config;
  config.support_size = 2;
  config.num_marginals = 3;
  config.master_seed = 60;
  const Instance instance = generate_instance(config, 4);
  const auto result = two_point_monge(instance);
  const auto gamma = monge_coupling(result.assignment, 2);
  const auto barycenter = extract_barycenter(instance, gamma);

  REQUIRE(barycenter.atoms.size() == 2);
  for (int k = 0; k < 2; ++k) {
    const IndexTuple tuple = result.assignment.tuple_at(k);
    std::vector<double> mean(instance.dim(), 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < instance.dim(); ++j)
        mean[j] += instance.marginals[i].points[tuple[i]][j] / 3.0;
    for (int j = 0; j < instance.dim(); ++j)
      CHECK(barycenter.atoms[k].first[j] == doctest::Approx(mean[j]).epsilon(1e-12));
  }
}

TEST_CASE("coinciding means are merged with their weights added") {
  const auto instance = make_instance({{{0.0}, {2.0}}, {{2.0}, {0.0}}});
  Coupling<double> coupling;
  coupling.entries[{0, 0}] = 0.5;  // mean 1
  coupling.entries[{1, 1}] = 0.5;  // mean 1 as well
  const auto barycenter = extract_barycenter(instance, coupling);
  REQUIRE(barycenter.atoms.size() == 1);
  CHECK(barycenter.atoms[0].first[0] == doctest::Approx(1.0));
  CHECK(barycenter.atoms[0].second == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("infeasible couplings are rejected") {
  const auto instance = make_instance({{{0.0}, {2.0}}, {{2.0}, {0.0}}});
  Coupling<double> bad;
  bad.entries[{0, 0}] = 1.0;
  CHECK_THROWS_AS(extract_barycenter(instance, bad), InfeasibleCoupling);
}

TEST_CASE("exact extraction produces exact rational atoms") {
  const Instance instance = reference_example();
  const auto lp =
      solve_lp(instance, build_tensor_exact(instance, CostConvention::PairwiseUnordered));
  const auto barycenter = extract_barycenter(instance, lp.coupling);

  REQUIRE(barycenter.atoms.size() == 6);
  const Rational sixth = Rational(1) / 6;
  for (const auto& [point, weight] : barycenter.atoms) CHECK(weight == sixth);
  CHECK(barycenter.total_weight() == 1);

  const auto& expected = mmot_test::ref_barycenter_atoms();
  for (std::size_t a = 0; a < expected.size(); ++a)
    for (int j = 0; j < 2; ++j)
      CHECK(to_double(barycenter.atoms[a].first[j]) ==
            doctest::Approx(expected[a][j]).epsilon(1e-12));
}

TEST_CASE("w2_squared on hand-checked pairs") {
  EmpiricalMeasure mu;
  mu.points = {{0.0, 0.0}};
  EmpiricalMeasure nu;
  nu.points = {{3.0, 4.0}};
  CHECK(w2_squared(mu, mu) == doctest::Approx(0.0));
  CHECK(w2_squared(mu, nu) == doctest::Approx(25.0).epsilon(1e-14));

  EmpiricalMeasure a;
  a.points = {{0.0}, {1.0}};
  EmpiricalMeasure b;
  b.points = {{2.0}, {3.0}};
  CHECK(w2_squared(a, b) == doctest::Approx(4.0).epsilon(1e-14));

  DiscreteBarycenter dirac;
  dirac.atoms = {{{0.0}, 1.0}};
  CHECK(w2_squared(a, dirac) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("w2_squared rejects dimension mismatches") {
  EmpiricalMeasure mu;
  mu.points = {{0.0, 0.0}};
  EmpiricalMeasure nu;
  nu.points = {{1.0}};
  CHECK_THROWS_AS(w2_squared(mu, nu), DimensionMismatch);
}

TEST_CASE("one-marginal functional at the mean equals the variance") {
  const auto instance = make_instance({{{0.0}, {2.0}}});
  DiscreteBarycenter mean;
  mean.atoms = {{{1.0}, 1.0}};
  CHECK(barycenter_functional(instance, mean) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("functional equals lp/N on seeded instances") {
  GeneratorConfig config;
  config.master_seed = 2025;
  for (int trial = 0; trial < 8; ++trial) {
    config.num_marginals = 2 + trial % 3;
    config.support_size = 2 + trial % 3;
    config.dim = 1 + trial % 3;
    const Instance instance = generate_instance(config, trial);
    const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
    const auto barycenter = extract_barycenter(instance, lp.coupling);
    const double functional = barycenter_functional(instance, barycenter);
    const double expected = lp.value / config.num_marginals;
    CHECK(functional == doctest::Approx(expected).epsilon(1e-8));

    const int bound = config.num_marginals * (config.support_size - 1) + 1;
    CHECK(static_cast<int>(barycenter.atoms.size()) <= bound);
  }
}
