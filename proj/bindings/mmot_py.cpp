#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>
#include <vector>

#include "mmot/barycenter.hpp"
#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/monge.hpp"
#include "mmot/rational.hpp"
#include "mmot/reference_example.hpp"
#include "mmot/search.hpp"
#include "mmot/simplex.hpp"

namespace py = pybind11;
using namespace mmot;

namespace {

using Marginals = std::vector<std::vector<std::vector<double>>>;

Instance instance_from(const Marginals& marginals) {
  Instance instance;
  instance.marginals.resize(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i)
    instance.marginals[i].points = marginals[i];
  validate(instance);
  return instance;
}

CostConvention convention_from(const std::string& name) {
  if (name == "pairwise") return CostConvention::PairwiseUnordered;
  if (name == "negsum") return CostConvention::NegSquaredSum;
  throw InvalidConfig("unknown convention: " + name + " (expected pairwise or negsum)");
}

// Index tuples are 0-based here, matching Python sequence indexing. (The
// command-line reports are 1-based instead, following the usual published
// presentation.)
py::list support_list(const Coupling<double>& coupling) {
  py::list out;
  for (const auto& [tuple, weight] : coupling.entries)
    out.append(py::make_tuple(py::cast(tuple), weight));
  return out;
}

py::dict solve_py(const Marginals& marginals, bool exact, const std::string& convention) {
  const Instance instance = instance_from(marginals);
  const CostConvention conv = convention_from(convention);
  py::dict out;

  double lp_value;
  double mmc;
  bool non_monge;
  if (exact) {
    const auto tensor = build_tensor_exact(instance, conv);
    const auto lp = solve_lp(instance, tensor);
    const auto monge = enumerate_mmc(instance, tensor);
    const Rational gap = monge.mmc - lp.value;
    lp_value = to_double(lp.value);
    mmc = to_double(monge.mmc);
    non_monge = gap > 0;
    out["lp_value_exact"] = lp.value.str();
    out["mmc_exact"] = monge.mmc.str();
    out["gap_exact"] = gap.str();
    out["mode"] = "exact-rational";
    py::list support;
    for (const auto& [tuple, weight] : lp.coupling.entries)
      support.append(py::make_tuple(py::cast(tuple), to_double(weight), weight.str()));
    out["support"] = support;
    out["iterations"] = lp.iterations;
    out["enumerated"] = monge.enumerated;
  } else {
    const auto tensor = build_tensor(instance, conv);
    const auto lp = solve_lp(instance, tensor);
    const auto monge = enumerate_mmc(instance, tensor);
    lp_value = lp.value;
    mmc = monge.mmc;
    const ClassifyTolerances tolerances;
    non_monge =
        mmc - lp_value > std::max(tolerances.abs_tol, tolerances.rel_tol * std::abs(lp_value));
    out["mode"] = "float64";
    out["support"] = support_list(lp.coupling);
    out["iterations"] = lp.iterations;
    out["enumerated"] = monge.enumerated;
  }
  out["lp_value"] = lp_value;
  out["mmc"] = mmc;
  const double gap = std::max(mmc - lp_value, 0.0);
  out["relative_gap_percent"] = lp_value != 0.0 ? 100.0 * gap / std::abs(lp_value) : 0.0;
  out["classification"] = non_monge ? "NonMonge" : "Monge";
  return out;
}

py::dict mmc_py(const Marginals& marginals, const std::string& convention) {
  const Instance instance = instance_from(marginals);
  const auto tensor = build_tensor(instance, convention_from(convention));
  const auto report = enumerate_mmc(instance, tensor);
  py::dict out;
  out["mmc"] = report.mmc;
  out["enumerated"] = report.enumerated;
  out["sigmas"] = report.best.sigmas;
  py::list tuples;
  for (int k = 0; k < instance.support_size(); ++k)
    tuples.append(py::cast(report.best.tuple_at(k)));
  out["tuples"] = tuples;
  return out;
}

py::dict two_point_py(const Marginals& marginals) {
  const Instance instance = instance_from(marginals);
  const auto result = two_point_monge(instance);
  py::dict out;
  out["value"] = result.value;
  out["sigmas"] = result.assignment.sigmas;
  return out;
}

py::dict barycenter_py(const Marginals& marginals) {
  const Instance instance = instance_from(marginals);
  const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
  const auto barycenter = extract_barycenter(instance, lp.coupling);
  py::dict out;
  py::list atoms;
  for (const auto& [point, weight] : barycenter.atoms)
    atoms.append(py::make_tuple(py::cast(point), weight));
  out["atoms"] = atoms;
  out["lp_value"] = lp.value;
  out["functional_value"] = barycenter_functional(instance, barycenter);
  return out;
}

py::dict search_py(std::int64_t trials, std::uint64_t seed, int N, int m, int d,
                   const std::string& dist, double sigma, double tol, bool exact_audit,
                   int workers) {
  GeneratorConfig config;
  config.num_marginals = N;
  config.support_size = m;
  config.dim = d;
  config.scale = sigma;
  config.master_seed = seed;
  if (dist == "cube") config.distribution = Distribution::UniformCube;
  else if (dist != "gaussian") throw InvalidConfig("unknown distribution: " + dist);
  ClassifyTolerances tolerances;
  tolerances.abs_tol = tol;
  tolerances.exact_audit = exact_audit;

  SearchResult result;
  {
    py::gil_scoped_release release;
    result = run_search(config, trials, tolerances, workers);
  }

  py::dict out;
  out["trials"] = result.summary.trials;
  out["failures"] = result.summary.failures;
  out["failure_rate"] = result.summary.failure_rate;
  out["max_gap_percent"] = result.summary.max_gap_percent;
  out["solver_errors"] = result.summary.solver_errors;
  out["audits_refuted"] = result.summary.audits_refuted;
  py::list records;
  for (const auto& record : result.failures) {
    py::dict r;
    r["trial"] = record.trial_index;
    r["digest"] = record.digest();
    r["lp_value"] = record.lp_value;
    r["mmc"] = record.mmc;
    r["relative_gap_percent"] = record.relative_gap_percent;
    records.append(r);
  }
  out["failure_records"] = records;
  py::list bins;
  for (const auto& bin : result.summary.histogram)
    bins.append(py::make_tuple(bin.lower, bin.upper, bin.count));
  out["histogram"] = bins;
  return out;
}

Marginals reference_py() {
  const Instance instance = reference_example();
  Marginals out;
  for (const auto& measure : instance.marginals) out.push_back(measure.points);
  return out;
}

}  // namespace

PYBIND11_MODULE(_mmot, m) {
  m.doc() = "Multi-marginal optimal transport: dense simplex solver (float64 and exact "
            "rational), Monge-cost enumeration, Wasserstein barycenters, and a seeded "
            "counterexample search.";

  py::register_exception<Error>(m, "Error");

  m.def("solve", &solve_py, py::arg("marginals"), py::arg("exact") = false,
        py::arg("convention") = "pairwise",
        "Solve the transport LP, enumerate the minimal Monge cost, and classify the "
        "instance. Index tuples in the result are 0-based.");
  m.def("mmc", &mmc_py, py::arg("marginals"), py::arg("convention") = "pairwise",
        "Minimal cost over all transport maps, by exhaustive enumeration.");
  m.def("two_point", &two_point_py, py::arg("marginals"),
        "Closed-form optimal assignment for two-point marginals (m = 2).");
  m.def("monotone", [](const Marginals& marginals) {
          return monotone_1d(instance_from(marginals)).sigmas;
        }, py::arg("marginals"),
        "Sorted matching for one-dimensional marginals; returns the permutations.");
  m.def("barycenter", &barycenter_py, py::arg("marginals"),
        "Extract the Wasserstein barycenter from an optimal coupling via the mean map.");
  m.def("search", &search_py, py::arg("trials"), py::arg("seed") = 0, py::arg("N") = 3,
        py::arg("m") = 3, py::arg("d") = 2, py::arg("dist") = "gaussian",
        py::arg("sigma") = 3.0, py::arg("tol") = 1e-7, py::arg("exact_audit") = false,
        py::arg("workers") = 0,
        "Seeded randomized search for instances without a Monge solution. Results are "
        "independent of the worker count.");
  m.def("pairwise_cost",
        [](const std::vector<std::vector<double>>& points) { return pairwise_cost(points); },
        py::arg("points"), "Sum of squared distances over unordered point pairs.");
  m.def("negsum_cost",
        [](const std::vector<std::vector<double>>& points) { return negsum_cost(points); },
        py::arg("points"), "Negative squared norm of the point sum.");
  m.def("reference_example", &reference_py,
        "The built-in 3x3x3 instance in R^2 that admits no Monge solution.");
}
