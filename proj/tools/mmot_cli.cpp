// Command-line surface: solve | monge | barycenter | search |
// verify-paper-example | two-point. Exit codes: 0 success, 1 input error,
// 2 solver/internal error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmot/barycenter.hpp"
#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/io.hpp"
#include "mmot/monge.hpp"
#include "mmot/rational.hpp"
#include "mmot/reference_example.hpp"
#include "mmot/search.hpp"
#include "mmot/simplex.hpp"

namespace {

using nlohmann::json;
using namespace mmot;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

int exit_code_for(const Error& e) {
  if (dynamic_cast<const IterationLimit*>(&e) != nullptr ||
      dynamic_cast<const CertificateInvalid*>(&e) != nullptr ||
      dynamic_cast<const InfeasibleCoupling*>(&e) != nullptr ||
      dynamic_cast<const InternalSolverError*>(&e) != nullptr)
    return kExitInternal;
  return kExitInput;
}

CostConvention parse_convention(const std::string& name) {
  return name == "negsum" ? CostConvention::NegSquaredSum : CostConvention::PairwiseUnordered;
}

// Indices are 1-based in every report, matching the usual presentation of
// the 3x3x3 example.
json tuple_json(const IndexTuple& tuple) {
  json a = json::array();
  for (int v : tuple) a.push_back(v + 1);
  return a;
}

json sigmas_json(const MongeAssignment& assignment) {
  json a = json::array();
  for (const auto& sigma : assignment.sigmas) {
    json s = json::array();
    for (int v : sigma) s.push_back(v + 1);
    a.push_back(std::move(s));
  }
  return a;
}

json assignment_json(const MongeAssignment& assignment, int m) {
  json a;
  a["sigmas"] = sigmas_json(assignment);
  json tuples = json::array();
  for (int k = 0; k < m; ++k) tuples.push_back(tuple_json(assignment.tuple_at(k)));
  a["tuples"] = std::move(tuples);
  return a;
}

// Coupling weights are always emitted at full precision so the report
// re-verifies as a feasible plan when read back.
json coupling_json(const Coupling<double>& coupling) {
  json a = json::array();
  for (const auto& [tuple, weight] : coupling.entries)
    a.push_back(json{{"tuple", tuple_json(tuple)}, {"weight", weight}});
  return a;
}

json coupling_json(const Coupling<Rational>& coupling) {
  json a = json::array();
  for (const auto& [tuple, weight] : coupling.entries)
    a.push_back(json{{"tuple", tuple_json(tuple)},
                     {"weight", to_double(weight)},
                     {"weight_exact", weight.str()}});
  return a;
}

json barycenter_json(const DiscreteBarycenter& barycenter) {
  json atoms = json::array();
  for (const auto& [point, weight] : barycenter.atoms)
    atoms.push_back(json{{"point", point}, {"weight", weight}});
  return json{{"atom_count", barycenter.atoms.size()}, {"atoms", std::move(atoms)}};
}

json barycenter_json(const DiscreteBarycenterT<Rational>& barycenter) {
  json atoms = json::array();
  for (const auto& [point, weight] : barycenter.atoms) {
    json coordinates = json::array();
    json exact = json::array();
    for (const auto& c : point) {
      coordinates.push_back(to_double(c));
      exact.push_back(c.str());
    }
    atoms.push_back(json{{"point", std::move(coordinates)},
                         {"point_exact", std::move(exact)},
                         {"weight", to_double(weight)},
                         {"weight_exact", weight.str()}});
  }
  return json{{"atom_count", barycenter.atoms.size()}, {"atoms", std::move(atoms)}};
}

void emit(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write output file: " + out_path);
  out << text;
}

template <typename T>
void double_entries(CostTensor<T>& tensor) {
  for (auto& v : tensor.values) v = v * 2;
}

struct SolveFlags {
  std::string instance_file;
  std::string convention = "pairwise";
  std::string out;
  bool exact = false;
  bool ordered_pairs = false;
  bool with_barycenter = false;
  bool full_precision = false;
};

void require_pairwise_for_ordered(const SolveFlags& flags) {
  if (flags.ordered_pairs && flags.convention != "pairwise")
    throw InvalidConfig("--ordered-pairs applies to the pairwise convention only");
}

template <typename T>
json solve_report(const Instance& instance, const CostTensor<T>& tensor, bool full_precision,
                  bool with_barycenter) {
  const auto lp = solve_lp(instance, tensor);
  const auto monge = enumerate_mmc(instance, tensor);
  json report;

  double lp_value;
  double mmc;
  bool non_monge;
  if constexpr (std::is_same_v<T, Rational>) {
    const Rational gap = monge.mmc - lp.value;
    lp_value = to_double(lp.value);
    mmc = to_double(monge.mmc);
    non_monge = gap > 0;
    report["lp_value_exact"] = lp.value.str();
    report["mmc_exact"] = monge.mmc.str();
    report["gap_exact"] = gap.str();
    report["certificate_status"] = "verified-exact";
    report["mode"] = "exact-rational";
  } else {
    lp_value = lp.value;
    mmc = monge.mmc;
    const ClassifyTolerances tolerances;
    non_monge = mmc - lp_value > std::max(tolerances.abs_tol, tolerances.rel_tol * std::abs(lp_value));
    report["certificate_status"] = "verified";
    report["mode"] = "float64";
  }

  const double gap = std::max(mmc - lp_value, 0.0);
  report["lp_value"] = display_value(lp_value, full_precision);
  report["mmc"] = display_value(mmc, full_precision);
  report["relative_gap_percent"] =
      display_value(lp_value != 0.0 ? 100.0 * gap / std::abs(lp_value) : 0.0, full_precision);
  report["classification"] = non_monge ? "NonMonge" : "Monge";
  report["iterations"] = lp.iterations;
  report["enumerated_assignments"] = monge.enumerated;
  report["optimal_coupling"] = coupling_json(lp.coupling);
  report["best_assignment"] = assignment_json(monge.best, instance.support_size());
  if (with_barycenter)
    report["barycenter"] = barycenter_json(extract_barycenter(instance, lp.coupling));
  return report;
}

int run_solve(const SolveFlags& flags) {
  require_pairwise_for_ordered(flags);
  const Instance instance = load_instance(flags.instance_file);
  const CostConvention convention = parse_convention(flags.convention);

  json report;
  if (flags.exact) {
    auto tensor = build_tensor_exact(instance, convention);
    if (flags.ordered_pairs) double_entries(tensor);
    report = solve_report(instance, tensor, flags.full_precision, flags.with_barycenter);
  } else {
    auto tensor = build_tensor(instance, convention);
    if (flags.ordered_pairs) double_entries(tensor);
    report = solve_report(instance, tensor, flags.full_precision, flags.with_barycenter);
  }
  report["convention"] = flags.convention;
  if (flags.ordered_pairs) report["ordered_pairs"] = true;
  emit(report, flags.out);
  return kExitOk;
}

int run_monge(const SolveFlags& flags) {
  require_pairwise_for_ordered(flags);
  const Instance instance = load_instance(flags.instance_file);
  const CostConvention convention = parse_convention(flags.convention);

  json report;
  report["convention"] = flags.convention;
  if (flags.ordered_pairs) report["ordered_pairs"] = true;
  if (flags.exact) {
    auto tensor = build_tensor_exact(instance, convention);
    if (flags.ordered_pairs) double_entries(tensor);
    const auto monge = enumerate_mmc(instance, tensor);
    report["mode"] = "exact-rational";
    report["mmc"] = display_value(to_double(monge.mmc), flags.full_precision);
    report["mmc_exact"] = monge.mmc.str();
    report["enumerated_assignments"] = monge.enumerated;
    report["best_assignment"] = assignment_json(monge.best, instance.support_size());
  } else {
    auto tensor = build_tensor(instance, convention);
    if (flags.ordered_pairs) double_entries(tensor);
    const auto monge = enumerate_mmc(instance, tensor);
    report["mode"] = "float64";
    report["mmc"] = display_value(monge.mmc, flags.full_precision);
    report["enumerated_assignments"] = monge.enumerated;
    report["best_assignment"] = assignment_json(monge.best, instance.support_size());
  }
  emit(report, flags.out);
  return kExitOk;
}

int run_barycenter(const SolveFlags& flags) {
  const Instance instance = load_instance(flags.instance_file);
  const int N = instance.num_marginals();
  json report;

  DiscreteBarycenter barycenter;  // float view used for the functional cross-check
  double lp_value;
  if (flags.exact) {
    const auto tensor = build_tensor_exact(instance, CostConvention::PairwiseUnordered);
    const auto lp = solve_lp(instance, tensor);
    const auto exact = extract_barycenter(instance, lp.coupling);
    lp_value = to_double(lp.value);
    report["mode"] = "exact-rational";
    report["lp_value_exact"] = lp.value.str();
    report["barycenter"] = barycenter_json(exact);
    for (const auto& [point, weight] : exact.atoms) {
      std::vector<double> p;
      p.reserve(point.size());
      for (const auto& c : point) p.push_back(to_double(c));
      barycenter.atoms.emplace_back(std::move(p), to_double(weight));
    }
  } else {
    const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
    const auto lp = solve_lp(instance, tensor);
    barycenter = extract_barycenter(instance, lp.coupling);
    lp_value = lp.value;
    report["mode"] = "float64";
    report["barycenter"] = barycenter_json(barycenter);
  }

  const double functional = barycenter_functional(instance, barycenter);
  const double expected = lp_value / N;
  report["lp_value"] = display_value(lp_value, flags.full_precision);
  report["functional_value"] = display_value(functional, flags.full_precision);
  report["lp_value_over_n"] = display_value(expected, flags.full_precision);
  report["functional_minus_lp_over_n"] =
      display_value(functional - expected, flags.full_precision);
  report["support_bound"] = N * (instance.support_size() - 1) + 1;
  emit(report, flags.out);
  return kExitOk;
}

struct TwoPointFlags {
  std::string instance_file;
  std::string out;
  bool check_lp = false;
  bool full_precision = false;
};

int run_two_point(const TwoPointFlags& flags) {
  const Instance instance = load_instance(flags.instance_file);
  const auto result = two_point_monge(instance);

  json report;
  report["mode"] = "float64";
  report["value"] = display_value(result.value, flags.full_precision);
  report["assignment"] = assignment_json(result.assignment, instance.support_size());
  if (flags.check_lp) {
    const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
    const auto lp = solve_lp(instance, tensor);
    report["lp_value"] = display_value(lp.value, flags.full_precision);
    report["value_minus_lp"] = display_value(result.value - lp.value, flags.full_precision);
  }
  emit(report, flags.out);
  return kExitOk;
}

struct SearchFlags {
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  int N = 3;
  int m = 3;
  int d = 2;
  std::string dist = "gaussian";
  double sigma = 3.0;
  double tol = 1e-7;
  bool exact_audit = false;
  std::string hist_out;
  std::string log_out;
  int workers = 0;
  std::string out;
  bool full_precision = false;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write output file: " + path);
  out << content;
}

int run_search(const SearchFlags& flags) {
  GeneratorConfig config;
  config.num_marginals = flags.N;
  config.support_size = flags.m;
  config.dim = flags.d;
  config.distribution =
      flags.dist == "cube" ? Distribution::UniformCube : Distribution::IsotropicGaussian;
  config.scale = flags.sigma;
  config.master_seed = flags.seed;

  ClassifyTolerances tolerances;
  tolerances.abs_tol = flags.tol;
  tolerances.exact_audit = flags.exact_audit;

  const SearchResult result = mmot::run_search(config, flags.trials, tolerances, flags.workers);

  // Everything in the summary is independent of worker count and wall time,
  // so an identical seed reproduces it byte for byte.
  json summary;
  summary["trials"] = result.summary.trials;
  summary["failures"] = result.summary.failures;
  summary["failure_rate"] = display_value(result.summary.failure_rate, flags.full_precision);
  summary["max_gap_percent"] = display_value(result.summary.max_gap_percent, flags.full_precision);
  summary["solver_errors"] = result.summary.solver_errors;
  if (flags.exact_audit) summary["audits_refuted"] = result.summary.audits_refuted;
  summary["config"] = json{{"N", flags.N},
                           {"m", flags.m},
                           {"d", flags.d},
                           {"distribution", flags.dist},
                           {"sigma", flags.sigma},
                           {"seed", flags.seed},
                           {"tol", flags.tol},
                           {"exact_audit", flags.exact_audit}};
  json bins = json::array();
  for (const auto& bin : result.summary.histogram)
    bins.push_back(json{{"lower", bin.lower}, {"upper", bin.upper}, {"count", bin.count}});
  summary["histogram"] = std::move(bins);
  emit(summary, flags.out);

  if (!flags.log_out.empty()) {
    std::ostringstream log;
    for (const auto& record : result.failures) {
      json line;
      line["trial"] = record.trial_index;
      line["digest"] = record.digest();
      line["lp_value"] = record.lp_value;
      line["mmc"] = record.mmc;
      line["relative_gap_percent"] = record.relative_gap_percent;
      line["classification"] = "NonMonge";
      if (flags.exact_audit)
        line["audit"] = record.audit == AuditStatus::Confirmed ? "confirmed" : "refuted";
      log << line.dump() << '\n';
    }
    write_file(flags.log_out, log.str());
  }

  if (!flags.hist_out.empty()) {
    const bool csv_only = ends_with(flags.hist_out, ".csv");
    const bool svg_only = ends_with(flags.hist_out, ".svg");
    if (!svg_only) {
      std::ostringstream csv;
      write_histogram_csv(result.summary, csv);
      write_file(csv_only ? flags.hist_out : flags.hist_out + ".csv", csv.str());
    }
    if (!csv_only) {
      std::ostringstream svg;
      write_histogram_svg(result.summary, svg);
      write_file(svg_only ? flags.hist_out : flags.hist_out + ".svg", svg.str());
    }
  }
  return kExitOk;
}

int run_verify_paper_example() {
  const Instance instance = reference_example();
  const ReferenceExpected& expected = reference_expected();
  bool all_passed = true;
  const auto check = [&all_passed](bool pass, const std::string& line) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << line << '\n';
    all_passed = all_passed && pass;
  };

  const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
  const auto lp = solve_lp(instance, tensor);
  {
    std::ostringstream line;
    line << "optimal transport cost " << format_double(lp.value, false) << " = "
         << expected.lp_value << " within " << expected.value_tolerance;
    check(std::abs(lp.value - expected.lp_value) <= expected.value_tolerance, line.str());
  }
  {
    std::vector<IndexTuple> support;
    for (const auto& [tuple, weight] : lp.coupling.entries) support.push_back(tuple);
    check(support == expected.lp_support,
          "optimal support is exactly the six published tuples");
    bool weights_ok = true;
    for (const auto& [tuple, weight] : lp.coupling.entries)
      weights_ok = weights_ok && std::abs(weight - expected.support_weight) <= 1e-9;
    check(weights_ok, "every optimal weight equals 1/6");
  }

  const auto monge = enumerate_mmc(instance, tensor);
  {
    std::ostringstream line;
    line << "minimal Monge cost " << format_double(monge.mmc, false) << " = " << expected.mmc
         << " within " << expected.value_tolerance;
    check(std::abs(monge.mmc - expected.mmc) <= expected.value_tolerance, line.str());
  }
  {
    std::vector<IndexTuple> tuples;
    for (int k = 0; k < instance.support_size(); ++k) tuples.push_back(monge.best.tuple_at(k));
    std::sort(tuples.begin(), tuples.end());
    check(tuples == expected.mmc_support && monge.best.sigmas == expected.mmc_sigmas,
          "best Monge coupling is supported on the three published tuples");
    check(monge.enumerated == 36, "enumerated all 36 transport maps");
  }

  {
    const auto exact_tensor = build_tensor_exact(instance, CostConvention::PairwiseUnordered);
    const auto exact_lp = solve_lp(instance, exact_tensor);
    const auto exact_monge = enumerate_mmc(instance, exact_tensor);
    const Rational gap = exact_monge.mmc - exact_lp.value;
    std::ostringstream line;
    line << "strict gap certified in rational arithmetic: mmc - lp = " << gap.str() << " (~"
         << format_double(to_double(gap), false) << ")";
    check(gap > 0, line.str());
  }

  std::cout << (all_passed ? "verification passed" : "verification FAILED") << '\n';
  return all_passed ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-marginal optimal transport: dense LP solver, Monge-cost "
               "enumeration, Wasserstein barycenters, counterexample search"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve the transport LP and classify the instance");
  solve->add_option("instance", solve_flags.instance_file, "instance JSON file")->required();
  solve->add_flag("--exact", solve_flags.exact, "rational arithmetic with exact certification");
  solve->add_option("--convention", solve_flags.convention, "cost convention")
      ->check(CLI::IsMember({"pairwise", "negsum"}));
  solve->add_flag("--ordered-pairs", solve_flags.ordered_pairs,
                  "sum the pairwise cost over ordered pairs (doubles every entry)");
  solve->add_flag("--with-barycenter", solve_flags.with_barycenter,
                  "include the barycenter extracted from the optimal coupling");
  solve->add_option("--out", solve_flags.out, "write the JSON report here instead of stdout");
  solve->add_flag("--full-precision", solve_flags.full_precision,
                  "shortest round-trip floats instead of 6 significant digits");
  solve->callback([&] { exit_code = run_solve(solve_flags); });

  SolveFlags monge_flags;
  auto* monge = app.add_subcommand("monge", "enumerate every transport map and report the MMC");
  monge->add_option("instance", monge_flags.instance_file, "instance JSON file")->required();
  monge->add_flag("--exact", monge_flags.exact, "rational arithmetic");
  monge->add_option("--convention", monge_flags.convention, "cost convention")
      ->check(CLI::IsMember({"pairwise", "negsum"}));
  monge->add_flag("--ordered-pairs", monge_flags.ordered_pairs,
                  "sum the pairwise cost over ordered pairs");
  monge->add_option("--out", monge_flags.out, "write the JSON report here instead of stdout");
  monge->add_flag("--full-precision", monge_flags.full_precision, "shortest round-trip floats");
  monge->callback([&] { exit_code = run_monge(monge_flags); });

  SolveFlags barycenter_flags;
  auto* barycenter =
      app.add_subcommand("barycenter", "extract the Wasserstein barycenter of the marginals");
  barycenter->add_option("instance", barycenter_flags.instance_file, "instance JSON file")
      ->required();
  barycenter->add_flag("--exact", barycenter_flags.exact, "rational arithmetic");
  barycenter->add_option("--out", barycenter_flags.out,
                         "write the JSON report here instead of stdout");
  barycenter->add_flag("--full-precision", barycenter_flags.full_precision,
                       "shortest round-trip floats");
  barycenter->callback([&] { exit_code = run_barycenter(barycenter_flags); });

  TwoPointFlags two_point_flags;
  auto* two_point = app.add_subcommand(
      "two-point", "closed-form optimal assignment for two-point marginals (m = 2)");
  two_point->add_option("instance", two_point_flags.instance_file, "instance JSON file")
      ->required();
  two_point->add_flag("--check-lp", two_point_flags.check_lp,
                      "also solve the LP and report the difference");
  two_point->add_option("--out", two_point_flags.out,
                        "write the JSON report here instead of stdout");
  two_point->add_flag("--full-precision", two_point_flags.full_precision,
                      "shortest round-trip floats");
  two_point->callback([&] { exit_code = run_two_point(two_point_flags); });

  SearchFlags search_flags;
  auto* search =
      app.add_subcommand("search", "randomized search for instances without a Monge solution");
  search->add_option("--trials", search_flags.trials, "number of random instances")
      ->check(CLI::NonNegativeNumber);
  search->add_option("--seed", search_flags.seed, "master seed (default 0)");
  search->add_option("--N", search_flags.N, "marginals per instance (default 3)");
  search->add_option("--m", search_flags.m, "atoms per marginal (default 3)");
  search->add_option("--d", search_flags.d, "ambient dimension (default 2)");
  search->add_option("--dist", search_flags.dist, "sampling distribution")
      ->check(CLI::IsMember({"gaussian", "cube"}));
  search->add_option("--sigma", search_flags.sigma,
                     "Gaussian sigma / cube halfwidth (default 3)");
  search->add_option("--tol", search_flags.tol,
                     "absolute mmc - lp tolerance for the NonMonge verdict (default 1e-7)");
  search->add_flag("--exact-audit", search_flags.exact_audit,
                   "re-certify every NonMonge verdict in rational arithmetic");
  search->add_option("--hist-out", search_flags.hist_out,
                     "histogram path: *.csv, *.svg, or a prefix for both");
  search->add_option("--log-out", search_flags.log_out,
                     "failure log (JSON lines, one record per NonMonge instance)");
  search->add_option("--workers", search_flags.workers,
                     "worker threads (default: MMOT_THREADS or hardware)");
  search->add_option("--out", search_flags.out, "write the summary here instead of stdout");
  search->add_flag("--full-precision", search_flags.full_precision,
                   "shortest round-trip floats in the summary");
  search->callback([&] { exit_code = run_search(search_flags); });

  auto* verify = app.add_subcommand("verify-paper-example",
                                    "check the built-in 3x3x3 example against its published "
                                    "values, including the exact-arithmetic gap");
  verify->callback([&] { exit_code = run_verify_paper_example(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return exit_code;
}
