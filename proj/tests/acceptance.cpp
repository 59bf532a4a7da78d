// Acceptance gate: runs all nine criteria with their stated tolerances and
// prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
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

using namespace mmot;

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// ---------------------------------------------------------------------- 1
Criterion golden_reproduction(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  const Instance instance = reference_example();
  const ReferenceExpected& expected = reference_expected();

  const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
  const auto lp = solve_lp(instance, tensor);
  c.require(std::abs(lp.value - expected.lp_value) <= expected.value_tolerance,
            "lp value misses 68.027 +/- 0.001");

  std::vector<IndexTuple> support;
  for (const auto& [tuple, weight] : lp.coupling.entries) {
    support.push_back(tuple);
    c.require(std::abs(weight - expected.support_weight) <= 1e-9, "weight differs from 1/6");
  }
  c.require(support == expected.lp_support, "optimal support differs from the published six");

  const auto monge = enumerate_mmc(instance, tensor);
  c.require(std::abs(monge.mmc - expected.mmc) <= expected.value_tolerance,
            "mmc misses 68.065 +/- 0.001");
  std::vector<IndexTuple> tuples;
  for (int k = 0; k < 3; ++k) tuples.push_back(monge.best.tuple_at(k));
  std::sort(tuples.begin(), tuples.end());
  c.require(tuples == expected.mmc_support, "best Monge support differs");

  elapsed = seconds_since(start);
  c.require(elapsed < 1.0, "runtime reached 1s");
  return c;
}

// ---------------------------------------------------------------------- 2
Criterion exact_certification(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  const Instance instance = reference_example();
  const auto tensor = build_tensor_exact(instance, CostConvention::PairwiseUnordered);
  const auto lp = solve_lp(instance, tensor);
  const auto monge = enumerate_mmc(instance, tensor);

  c.require(monge.mmc - lp.value > 0, "mmc - lp not strictly positive as a rational");

  const auto report = verify_certificate(tensor, lp.coupling, lp.certificate);
  c.require(report.max_feasibility_violation <= 0, "dual infeasible at some tuple");
  c.require(report.max_slackness_gap == 0, "complementary slackness not exact");
  c.require(report.duality_gap == 0, "duality gap not exactly zero");

  elapsed = seconds_since(start);
  c.require(elapsed < 10.0, "runtime reached 10s");
  return c;
}

// ---------------------------------------------------------------------- 3
Criterion theorem_suite(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  GeneratorConfig config;
  config.support_size = 2;
  config.master_seed = 303;
  for (int t = 0; t < 300 && c.pass; ++t) {
    config.num_marginals = 2 + t % 5;  // 2..6
    config.dim = 1 + t % 4;            // 1..4
    const Instance instance = generate_instance(config, t);
    const auto result = two_point_monge(instance);
    const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
    c.require(close_rel(result.value, lp.value, 1e-9),
              "two_point value != lp value at trial " + std::to_string(t));
  }
  elapsed = seconds_since(start);
  return c;
}

// ---------------------------------------------------------------------- 4
Criterion birkhoff_suite(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  GeneratorConfig config;
  config.num_marginals = 2;
  config.master_seed = 404;
  for (int t = 0; t < 200 && c.pass; ++t) {
    config.support_size = 2 + t % 4;  // 2..5
    config.dim = 1 + t % 3;           // 1..3
    const Instance instance = generate_instance(config, t);
    const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
    const auto monge = enumerate_mmc(instance, tensor);
    const auto lp = solve_lp(instance, tensor);
    c.require(close_rel(monge.mmc, lp.value, 1e-9),
              "mmc != lp value at trial " + std::to_string(t));
  }
  elapsed = seconds_since(start);
  return c;
}

// ---------------------------------------------------------------------- 5
Criterion monotone_suite(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  GeneratorConfig config;
  config.dim = 1;
  config.master_seed = 505;
  for (int t = 0; t < 200 && c.pass; ++t) {
    config.num_marginals = 2 + t % 2;  // 2..3
    config.support_size = 2 + t % 4;   // 2..5
    const Instance instance = generate_instance(config, t);
    const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
    const auto assignment = monotone_1d(instance);
    const auto lp = solve_lp(instance, tensor);
    c.require(close_rel(assignment_cost(tensor, assignment), lp.value, 1e-9),
              "monotone cost != lp value at trial " + std::to_string(t));
  }
  elapsed = seconds_since(start);
  return c;
}

// ---------------------------------------------------------------------- 6
Criterion barycenter_equivalence(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  const auto check_instance = [&c](const Instance& instance, const std::string& label) {
    const int N = instance.num_marginals();
    const auto lp = solve_lp(instance, build_tensor(instance, CostConvention::PairwiseUnordered));
    const auto barycenter = extract_barycenter(instance, lp.coupling);
    const double functional = barycenter_functional(instance, barycenter);
    c.require(close_rel(functional, lp.value / N, 1e-8), "functional != lp/N at " + label);
    const int bound = N * (instance.support_size() - 1) + 1;
    c.require(static_cast<int>(barycenter.atoms.size()) <= bound,
              "atom count exceeds the vertex bound at " + label);
  };

  GeneratorConfig config;
  config.master_seed = 606;
  for (int t = 0; t < 100 && c.pass; ++t) {
    // Decoupled cycles so N != m occurs; the functional identity and the
    // vertex bound are asymmetric in (N, m).
    config.num_marginals = 2 + t % 3;
    config.support_size = 2 + (t / 3) % 3;
    config.dim = 1 + t % 3;
    check_instance(generate_instance(config, t), "trial " + std::to_string(t));
  }
  check_instance(reference_example(), "the reference example");
  elapsed = seconds_since(start);
  return c;
}

// ---------------------------------------------------------------------- 7
Criterion convention_identity(double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  GeneratorConfig config;
  config.master_seed = 707;
  for (int t = 0; t < 100 && c.pass; ++t) {
    // Decoupled cycles so N != m occurs; N*S distinguishes N from m only then.
    config.num_marginals = 2 + t % 3;
    config.support_size = 2 + (t / 3) % 3;
    config.dim = 1 + t % 3;
    const Instance instance = generate_instance(config, t);
    const int N = instance.num_marginals();
    const double shift = N * moments(instance).total;

    const auto pairwise = build_tensor(instance, CostConvention::PairwiseUnordered);
    const auto negsum = build_tensor(instance, CostConvention::NegSquaredSum);
    const auto lp_pairwise = solve_lp(instance, pairwise);
    const auto lp_negsum = solve_lp(instance, negsum);

    c.require(close_rel(lp_pairwise.value - lp_negsum.value, shift, 1e-9),
              "optima do not differ by N*S at trial " + std::to_string(t));

    // shared optimal support: each coupling is optimal under the other cost
    double cross_pairwise = 0.0;
    for (const auto& [tuple, weight] : lp_negsum.coupling.entries)
      cross_pairwise += weight * pairwise.at(tuple);
    double cross_negsum = 0.0;
    for (const auto& [tuple, weight] : lp_pairwise.coupling.entries)
      cross_negsum += weight * negsum.at(tuple);
    c.require(close_rel(cross_pairwise, lp_pairwise.value, 1e-9),
              "negsum optimizer not pairwise-optimal at trial " + std::to_string(t));
    c.require(close_rel(cross_negsum, lp_negsum.value, 1e-9),
              "pairwise optimizer not negsum-optimal at trial " + std::to_string(t));
  }
  elapsed = seconds_since(start);
  return c;
}

// -------------------------------------------------------------------- 8+9
std::string canonical_search_string(const SearchResult& result) {
  std::ostringstream out;
  char buffer[64];
  const auto num = [&buffer](double v) {
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return std::string(buffer);
  };
  out << result.summary.trials << '|' << result.summary.failures << '|'
      << num(result.summary.failure_rate) << '|' << num(result.summary.max_gap_percent) << '|'
      << result.summary.solver_errors << '|' << result.summary.audits_refuted << '\n';
  for (const auto& bin : result.summary.histogram)
    out << num(bin.lower) << ',' << num(bin.upper) << ',' << bin.count << '\n';
  for (const auto& record : result.failures)
    out << record.trial_index << '|' << record.digest() << '|' << num(record.lp_value) << '|'
        << num(record.mmc) << '|' << num(record.relative_gap_percent) << '\n';
  return out.str();
}

constexpr std::int64_t kSearchTrials = 50000;

GeneratorConfig search_config() {
  GeneratorConfig config;  // N = m = 3, d = 2, Gaussian sigma 3
  config.master_seed = 1;
  return config;
}

Criterion search_statistics(const SearchResult& result, double elapsed_run) {
  Criterion c;
  const double rate = result.summary.failure_rate;
  c.require(rate >= 2e-5 && rate <= 1e-3,
            "failure rate " + std::to_string(rate) + " outside [2e-5, 1e-3]");
  c.require(result.summary.max_gap_percent <= 10.0,
            "a relative gap exceeded 10%");
  c.require(result.summary.solver_errors == 0, "solver errors during the search");
  c.require(result.summary.audits_refuted == 0, "an exact audit refuted a float verdict");
  for (const auto& record : result.failures)
    c.require(record.audit == AuditStatus::Confirmed,
              "failure without exact confirmation at trial " +
                  std::to_string(record.trial_index));
  (void)elapsed_run;
  return c;
}

Criterion search_determinism(const SearchResult& first, double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  ClassifyTolerances tolerances;
  tolerances.exact_audit = true;
  const int other_workers = default_worker_count() == 1 ? 2 : 1;
  const SearchResult second = run_search(search_config(), kSearchTrials, tolerances, other_workers);
  c.require(canonical_search_string(first) == canonical_search_string(second),
            "summaries differ across worker counts");
  elapsed = seconds_since(start);
  return c;
}

}  // namespace

int main() {
  int passed = 0;
  const auto report = [&passed](int index, const std::string& name, const Criterion& c,
                                double elapsed) {
    std::printf("[%d/9] %-28s %s (%.2fs)%s%s\n", index, name.c_str(),
                c.pass ? "PASS" : "FAIL", elapsed, c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
    std::fflush(stdout);
    if (c.pass) ++passed;
  };

  try {
    double elapsed = 0.0;

    Criterion c1 = golden_reproduction(elapsed);
    report(1, "golden reproduction", c1, elapsed);

    Criterion c2 = exact_certification(elapsed);
    report(2, "exact certification", c2, elapsed);

    Criterion c3 = theorem_suite(elapsed);
    report(3, "theorem suite (m=2)", c3, elapsed);

    Criterion c4 = birkhoff_suite(elapsed);
    report(4, "birkhoff suite (N=2)", c4, elapsed);

    Criterion c5 = monotone_suite(elapsed);
    report(5, "monotone suite (d=1)", c5, elapsed);

    Criterion c6 = barycenter_equivalence(elapsed);
    report(6, "barycenter equivalence", c6, elapsed);

    Criterion c7 = convention_identity(elapsed);
    report(7, "cost-convention identity", c7, elapsed);

    const auto search_start = std::chrono::steady_clock::now();
    ClassifyTolerances tolerances;
    tolerances.exact_audit = true;
    const SearchResult search_run = run_search(search_config(), kSearchTrials, tolerances, 0);
    const double search_elapsed = seconds_since(search_start);
    Criterion c8 = search_statistics(search_run, search_elapsed);
    {
      std::ostringstream stats;
      stats << "failures " << search_run.summary.failures << "/" << kSearchTrials
            << ", max gap " << search_run.summary.max_gap_percent << "%";
      c8.detail = c8.detail.empty() ? stats.str() : c8.detail + "; " + stats.str();
    }
    report(8, "search statistics", c8, search_elapsed);

    Criterion c9 = search_determinism(search_run, elapsed);
    report(9, "search determinism", c9, elapsed);
  } catch (const Error& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }

  std::printf("ACCEPTANCE %d/9 %s\n", passed, passed == 9 ? "PASS" : "FAIL");
  return passed == 9 ? 0 : 1;
}
