#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/measures.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/simplex.hpp"

namespace mmot {

/// Deterministic coupling induced by one permutation per marginal beyond the
/// first: atom k of marginal 1 is paired with atom sigmas[i-1][k] of marginal
/// i+1. The first marginal's permutation is implicitly the identity.
struct MongeAssignment {
  std::vector<std::vector<int>> sigmas;

  IndexTuple tuple_at(int k) const {
    IndexTuple t(sigmas.size() + 1);
    t[0] = k;
    for (std::size_t i = 0; i < sigmas.size(); ++i) t[i + 1] = sigmas[i][k];
    return t;
  }
};

template <typename T>
struct MongeReportT {
  MongeAssignment best;
  T mmc{};
  std::int64_t enumerated = 0;
};
using MongeReport = MongeReportT<double>;

inline constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

/// Uniform coupling concentrated on the assignment's graph.
template <typename T = double>
Coupling<T> monge_coupling(const MongeAssignment& assignment, int m) {
  Coupling<T> gamma;
  T w;
  if constexpr (detail::is_exact_v<T>) w = T(1) / m;
  else w = 1.0 / m;
  for (int k = 0; k < m; ++k) gamma.entries[assignment.tuple_at(k)] = w;
  return gamma;
}

/// Average tensor cost along the assignment's graph, (1/m) sum_k c(tuple_k).
template <typename T>
T assignment_cost(const CostTensor<T>& tensor, const MongeAssignment& assignment) {
  const int m = tensor.shape.front();
  MultiIndex index(tensor.shape);
  T total{};
  for (int k = 0; k < m; ++k) total += tensor.values[index.flat(assignment.tuple_at(k))];
  if constexpr (detail::is_exact_v<T>) return total / m;
  else return total / static_cast<double>(m);
}

/// Exhaustive scan of all (m!)^(N-1) assignments. Ties break to the
/// lexicographically smallest flattened permutation sequence, which the scan
/// order delivers for free.
template <typename T>
MongeReportT<T> enumerate_mmc(const Instance& instance, const CostTensor<T>& tensor,
                              std::int64_t cap = kDefaultEnumerationCap) {
  validate(instance);
  const int N = instance.num_marginals();
  const int m = instance.support_size();

  std::vector<std::vector<int>> perms;
  if (N > 1) {
    std::int64_t factorial = 1;
    for (int k = 2; k <= m; ++k) {
      if (factorial > cap / k) throw EnumerationOverflow("(m!)^(N-1) exceeds the enumeration cap");
      factorial *= k;
    }
    std::int64_t total = 1;
    for (int i = 1; i < N; ++i) {
      if (total > cap / factorial)
        throw EnumerationOverflow("(m!)^(N-1) exceeds the enumeration cap");
      total *= factorial;
    }
    perms.reserve(factorial);
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  MultiIndex index(tensor.shape);
  std::vector<std::int64_t> strides(N);
  {
    IndexTuple unit(N, 0);
    for (int i = 0; i < N; ++i) {
      unit[i] = 1;
      strides[i] = index.flat(unit);
      unit[i] = 0;
    }
  }

  MongeReportT<T> report;
  std::vector<int> slot(N - 1, 0);  // permutation index per marginal beyond the first
  T best_total{};
  bool have_best = false;
  for (;;) {
    T cost{};
    for (int k = 0; k < m; ++k) {
      std::int64_t flat = k * strides[0];
      for (int i = 1; i < N; ++i) flat += perms[slot[i - 1]][k] * strides[i];
      cost += tensor.values[flat];
    }
    if (!have_best || cost < best_total) {
      best_total = cost;
      report.best.sigmas.clear();
      for (int i = 1; i < N; ++i) report.best.sigmas.push_back(perms[slot[i - 1]]);
      have_best = true;
    }
    ++report.enumerated;
    int j = N - 2;
    for (; j >= 0; --j) {
      if (++slot[j] < static_cast<int>(perms.size())) break;
      slot[j] = 0;
    }
    if (j < 0) break;
  }
  if constexpr (detail::is_exact_v<T>) report.mmc = best_total / m;
  else report.mmc = best_total / static_cast<double>(m);
  return report;
}

struct TwoPointResult {
  MongeAssignment assignment;
  double value = 0.0;  // pairwise-convention transport cost, equals the LP optimum
};

/// Constructive optimal assignment for two-point marginals: center the
/// instance, scan the 2^(N-1) sign choices for the one maximizing
/// |sum_i x_i^{a_i}|^2, and pair the chosen atoms together.
TwoPointResult two_point_monge(const Instance& instance,
                               std::int64_t cap = kDefaultEnumerationCap);

/// Sorted matching for one-dimensional marginals: the k-th smallest atoms
/// are paired together, ties broken by original atom index.
MongeAssignment monotone_1d(const Instance& instance);

}  // namespace mmot
