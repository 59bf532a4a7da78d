#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmot/measures.hpp"

namespace mmot {

enum class Distribution { IsotropicGaussian, UniformCube };

/// Random-instance generator. Every trial is derived from
/// (master_seed, trial_index) alone, so results do not depend on execution
/// order or worker count.
struct GeneratorConfig {
  int num_marginals = 3;
  int support_size = 3;
  int dim = 2;
  Distribution distribution = Distribution::IsotropicGaussian;
  double scale = 3.0;  // sigma for Gaussian, halfwidth for the cube
  std::uint64_t master_seed = 0;
};

void validate_config(const GeneratorConfig& config);

/// Per-trial stream derivation: seed_i = sm64(sm64(master_seed) ^ C*(i+1)).
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::int64_t trial_index);

Instance generate_instance(const GeneratorConfig& config, std::int64_t trial_index);

struct ClassifyTolerances {
  double abs_tol = 1e-7;
  double rel_tol = 1e-9;
  bool exact_audit = false;  // re-certify NonMonge verdicts in rational arithmetic
};

enum class Verdict { Monge, NonMonge };
enum class AuditStatus { NotRun, Confirmed, Refuted };

struct TrialRecord {
  std::int64_t trial_index = -1;
  double lp_value = 0.0;
  double mmc = 0.0;
  double relative_gap_percent = 0.0;
  Verdict classification = Verdict::Monge;
  AuditStatus audit = AuditStatus::NotRun;
  // seed-reconstructible identity; empty for ad-hoc instances
  std::uint64_t master_seed = 0;
  bool has_digest = false;

  std::string digest() const;
};

/// Solves the instance in float mode, enumerates the minimal Monge cost and
/// classifies: NonMonge iff mmc - lp exceeds max(abs_tol, rel_tol * lp).
TrialRecord classify(const Instance& instance, const ClassifyTolerances& tolerances = {});

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t count = 0;
};

struct SearchSummary {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double failure_rate = 0.0;
  double max_gap_percent = 0.0;
  std::int64_t solver_errors = 0;
  std::int64_t audits_refuted = 0;
  std::vector<HistogramBin> histogram;  // 20 equal-width bins over [0, max_gap_percent]
};

struct SearchResult {
  SearchSummary summary;
  std::vector<TrialRecord> failures;  // ascending trial index
};

/// Runs `trials` independent classifications. Trials are distributed over
/// workers (0 = MMOT_THREADS env or hardware concurrency); the outcome is
/// identical for every worker count. Per-trial solver failures are counted,
/// not fatal.
SearchResult run_search(const GeneratorConfig& config, std::int64_t trials,
                        const ClassifyTolerances& tolerances = {}, int workers = 0);

/// CSV columns bin_lower,bin_upper,count. A summary without failures
/// produces only the header line.
void write_histogram_csv(const SearchSummary& summary, std::ostream& out);

/// Standalone SVG bar chart of the same bins; empty axes when there are no
/// failures.
void write_histogram_svg(const SearchSummary& summary, std::ostream& out);

std::size_t default_worker_count();

}  // namespace mmot
