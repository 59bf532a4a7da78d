#include "mmot/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/io.hpp"
#include "mmot/monge.hpp"
#include "mmot/simplex.hpp"

namespace mmot {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform in (0,1]; 53 bits of the engine word. Derived directly from the
// raw output so the stream is identical on every platform, unlike
// std::uniform_real_distribution / std::normal_distribution.
double next_unit_positive(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

double next_unit(std::mt19937_64& rng) {  // [0,1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double next_gaussian(std::mt19937_64& rng) {
  const double u1 = next_unit_positive(rng);
  const double u2 = next_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

void check_enumeration_budget(const GeneratorConfig& config) {
  const auto cap = static_cast<std::int64_t>(kDefaultEnumerationCap);
  const std::int64_t m = config.support_size;
  std::int64_t entries = 1;
  for (int i = 0; i < config.num_marginals; ++i) {
    if (entries > cap / m) throw InvalidConfig("search: cost tensor would exceed the size cap");
    entries *= m;
  }
  std::int64_t factorial = 1;
  for (std::int64_t k = 2; k <= m; ++k) {
    if (factorial > cap / k) throw InvalidConfig("search: Monge enumeration would exceed the cap");
    factorial *= k;
  }
  std::int64_t total = 1;
  for (int i = 1; i < config.num_marginals; ++i) {
    if (total > cap / factorial) throw InvalidConfig("search: Monge enumeration would exceed the cap");
    total *= factorial;
  }
}

void check_shape(const GeneratorConfig& config) {
  if (config.num_marginals < 1) throw InvalidConfig("search: num_marginals must be at least 1");
  if (config.support_size < 1) throw InvalidConfig("search: support_size must be at least 1");
  if (config.dim < 1) throw InvalidConfig("search: dim must be at least 1");
  if (!(config.scale > 0.0) || !std::isfinite(config.scale))
    throw InvalidConfig("search: scale must be positive and finite");
}

}  // namespace

void validate_config(const GeneratorConfig& config) {
  check_shape(config);
  check_enumeration_budget(config);
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::int64_t trial_index) {
  const std::uint64_t base = splitmix64(master_seed);
  const std::uint64_t salt = 0xd6e8feb86659fd93ull * (static_cast<std::uint64_t>(trial_index) + 1);
  return splitmix64(base ^ salt);
}

Instance generate_instance(const GeneratorConfig& config, std::int64_t trial_index) {
  // Generation alone has no enumeration step, so only the shape is checked;
  // run_search applies the full budget via validate_config.
  check_shape(config);
  std::mt19937_64 rng(derive_trial_seed(config.master_seed, trial_index));
  Instance instance;
  instance.marginals.resize(config.num_marginals);
  // Fixed draw order (marginal, atom, coordinate) is part of the stream
  // contract: any reordering would silently change every seeded result.
  for (auto& measure : instance.marginals) {
    measure.points.assign(config.support_size, std::vector<double>(config.dim));
    for (auto& point : measure.points) {
      for (double& coordinate : point) {
        coordinate = config.distribution == Distribution::IsotropicGaussian
                         ? config.scale * next_gaussian(rng)
                         : config.scale * (2.0 * next_unit(rng) - 1.0);
      }
    }
  }
  return validate(instance);
}

std::string TrialRecord::digest() const {
  if (!has_digest) return {};
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "s%016llx-t%lld",
                static_cast<unsigned long long>(master_seed),
                static_cast<long long>(trial_index));
  return buffer;
}

namespace {

// Re-derives both values in rational arithmetic and checks the strict
// inequality that the float verdict asserts.
AuditStatus audit_nonmonge(const Instance& instance) {
  const auto tensor = build_tensor_exact(instance, CostConvention::PairwiseUnordered);
  const auto lp = solve_lp(instance, tensor);
  const auto monge = enumerate_mmc(instance, tensor);
  return monge.mmc > lp.value ? AuditStatus::Confirmed : AuditStatus::Refuted;
}

}  // namespace

TrialRecord classify(const Instance& instance, const ClassifyTolerances& tolerances) {
  const auto tensor = build_tensor(instance, CostConvention::PairwiseUnordered);
  const auto lp = solve_lp(instance, tensor);
  const auto monge = enumerate_mmc(instance, tensor);

  TrialRecord record;
  record.lp_value = lp.value;
  record.mmc = monge.mmc;
  const double gap = std::max(monge.mmc - lp.value, 0.0);
  record.relative_gap_percent = lp.value > 0.0 ? 100.0 * gap / lp.value : 0.0;
  const double threshold = std::max(tolerances.abs_tol, tolerances.rel_tol * std::abs(lp.value));
  record.classification =
      monge.mmc - lp.value > threshold ? Verdict::NonMonge : Verdict::Monge;
  if (record.classification == Verdict::NonMonge && tolerances.exact_audit)
    record.audit = audit_nonmonge(instance);
  return record;
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("MMOT_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1 && parsed <= 1024)
      return static_cast<std::size_t>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace {

std::vector<HistogramBin> build_histogram(const std::vector<TrialRecord>& failures,
                                          double max_gap_percent) {
  constexpr int kBins = 20;
  if (failures.empty() || !(max_gap_percent > 0.0)) return {};
  std::vector<HistogramBin> bins(kBins);
  const double width = max_gap_percent / kBins;
  for (int b = 0; b < kBins; ++b) {
    bins[b].lower = width * b;
    bins[b].upper = b + 1 == kBins ? max_gap_percent : width * (b + 1);
  }
  for (const auto& record : failures) {
    int b = static_cast<int>(record.relative_gap_percent / width);
    b = std::clamp(b, 0, kBins - 1);
    ++bins[b].count;
  }
  return bins;
}

}  // namespace

SearchResult run_search(const GeneratorConfig& config, std::int64_t trials,
                        const ClassifyTolerances& tolerances, int workers) {
  validate_config(config);
  if (trials < 0) throw InvalidConfig("search: trials must be non-negative");

  struct Slot {
    bool failed = false;
    bool error = false;
    TrialRecord record;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(trials));
  std::atomic<std::int64_t> next{0};

  auto work = [&] {
    for (;;) {
      const std::int64_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= trials) return;
      auto& slot = slots[static_cast<std::size_t>(t)];
      try {
        const Instance instance = generate_instance(config, t);
        TrialRecord record = classify(instance, tolerances);
        record.trial_index = t;
        record.master_seed = config.master_seed;
        record.has_digest = true;
        slot.failed = record.classification == Verdict::NonMonge;
        slot.record = std::move(record);
      } catch (const Error&) {
        slot.error = true;
      }
    }
  };

  std::size_t pool_size = workers > 0 ? static_cast<std::size_t>(workers) : default_worker_count();
  pool_size = std::min<std::size_t>(pool_size, std::max<std::int64_t>(trials, 1));
  std::vector<std::thread> pool;
  pool.reserve(pool_size > 0 ? pool_size - 1 : 0);
  for (std::size_t i = 1; i < pool_size; ++i) pool.emplace_back(work);
  work();
  for (auto& thread : pool) thread.join();

  // Aggregate strictly by trial index so the report is byte-identical for
  // every worker count.
  SearchResult result;
  result.summary.trials = trials;
  for (auto& slot : slots) {
    if (slot.error) {
      ++result.summary.solver_errors;
      continue;
    }
    if (!slot.failed) continue;
    ++result.summary.failures;
    result.summary.max_gap_percent =
        std::max(result.summary.max_gap_percent, slot.record.relative_gap_percent);
    if (slot.record.audit == AuditStatus::Refuted) ++result.summary.audits_refuted;
    result.failures.push_back(std::move(slot.record));
  }
  const std::int64_t classified = trials - result.summary.solver_errors;
  result.summary.failure_rate =
      classified > 0 ? static_cast<double>(result.summary.failures) / classified : 0.0;
  result.summary.histogram = build_histogram(result.failures, result.summary.max_gap_percent);
  return result;
}

void write_histogram_csv(const SearchSummary& summary, std::ostream& out) {
  out << "bin_lower,bin_upper,count\n";
  for (const auto& bin : summary.histogram)
    out << format_double(bin.lower, true) << ',' << format_double(bin.upper, true) << ','
        << bin.count << '\n';
}

void write_histogram_svg(const SearchSummary& summary, std::ostream& out) {
  constexpr int kWidth = 720;
  constexpr int kHeight = 400;
  constexpr int kLeft = 60;
  constexpr int kRight = 20;
  constexpr int kTop = 30;
  constexpr int kBottom = 50;
  const int plot_w = kWidth - kLeft - kRight;
  const int plot_h = kHeight - kTop - kBottom;

  std::int64_t max_count = 0;
  for (const auto& bin : summary.histogram) max_count = std::max(max_count, bin.count);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">relative gap of non-Monge instances (%), "
      << summary.failures << " / " << summary.trials << " trials</text>\n";
  // axes
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  if (!summary.histogram.empty() && max_count > 0) {
    const double bin_w = static_cast<double>(plot_w) / summary.histogram.size();
    for (std::size_t b = 0; b < summary.histogram.size(); ++b) {
      const auto& bin = summary.histogram[b];
      const double h = static_cast<double>(plot_h) * bin.count / max_count;
      svg << "  <rect x=\"" << kLeft + bin_w * b + 1 << "\" y=\"" << kTop + plot_h - h
          << "\" width=\"" << bin_w - 2 << "\" height=\"" << h
          << "\" fill=\"#4878a8\"><title>[" << bin.lower << ", " << bin.upper << "]: " << bin.count
          << "</title></rect>\n";
    }
    svg << "  <text x=\"" << kLeft << "\" y=\"" << kHeight - 25
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n";
    svg << "  <text x=\"" << kLeft + plot_w << "\" y=\"" << kHeight - 25
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << summary.max_gap_percent << "</text>\n";
    svg << "  <text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 5
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << max_count
        << "</text>\n";
  } else {
    svg << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#888\">no non-Monge instances found</text>\n";
  }
  svg << "</svg>\n";
  out << svg.str();
}

}  // namespace mmot
