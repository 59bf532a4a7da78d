#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/measures.hpp"
#include "mmot/rational.hpp"
#include "mmot/simplex.hpp"

namespace mmot {

/// Finitely supported measure with explicit positive weights summing to 1.
template <typename T>
struct DiscreteBarycenterT {
  std::vector<std::pair<std::vector<T>, T>> atoms;

  T total_weight() const {
    T s{};
    for (const auto& [p, w] : atoms) s += w;
    return s;
  }
};
using DiscreteBarycenter = DiscreteBarycenterT<double>;

/// Pushforward of a coupling under the mean map B(x) = (1/N) sum_i x_i.
/// Atoms whose coordinates coincide (within merge_tol in float mode, exactly
/// in rational mode) are merged by adding their weights. Atom order follows
/// the first occurrence in lexicographic tuple order.
template <typename T>
DiscreteBarycenterT<T> extract_barycenter(const Instance& instance, const Coupling<T>& coupling,
                                          double feas_tol = 1e-9, double merge_tol = 1e-9);

/// Exact squared 2-Wasserstein distance between finitely supported measures,
/// computed by a two-marginal transport LP.
double w2_squared(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                  const SolverConfig& config = {});
double w2_squared(const EmpiricalMeasure& mu, const DiscreteBarycenter& nu,
                  const SolverConfig& config = {});

/// sum_i W2^2(mu_i, nu) over the instance's marginals.
double barycenter_functional(const Instance& instance, const DiscreteBarycenter& nu,
                             const SolverConfig& config = {});
double barycenter_functional(const Instance& instance, const EmpiricalMeasure& nu,
                             const SolverConfig& config = {});

// ---------------------------------------------------------------------------

template <typename T>
DiscreteBarycenterT<T> extract_barycenter(const Instance& instance, const Coupling<T>& coupling,
                                          double feas_tol, double merge_tol) {
  validate(instance);
  CouplingReport report = verify_coupling(instance, coupling);
  const double tol = detail::is_exact_v<T> ? 0.0 : feas_tol;
  if (report.max_violation > tol)
    throw InfeasibleCoupling("coupling violates the marginal constraints by " +
                             std::to_string(report.max_violation));

  const int N = instance.num_marginals();
  const int d = instance.dim();

  DiscreteBarycenterT<T> bary;
  for (const auto& [tuple, w] : coupling.entries) {
    std::vector<T> mean(d, T{});
    for (int i = 0; i < N; ++i) {
      const auto& p = instance.marginals[i].points[tuple[i]];
      for (int j = 0; j < d; ++j) {
        if constexpr (detail::is_exact_v<T>) mean[j] += to_rational(p[j]);
        else mean[j] += p[j];
      }
    }
    for (int j = 0; j < d; ++j) {
      if constexpr (detail::is_exact_v<T>) mean[j] /= N;
      else mean[j] /= static_cast<double>(N);
    }

    bool merged = false;
    for (auto& [point, weight] : bary.atoms) {
      bool same = true;
      for (int j = 0; j < d && same; ++j) {
        if constexpr (detail::is_exact_v<T>) same = point[j] == mean[j];
        else same = std::abs(static_cast<double>(point[j] - mean[j])) <= merge_tol;
      }
      if (same) {
        weight += w;
        merged = true;
        break;
      }
    }
    if (!merged) bary.atoms.emplace_back(std::move(mean), w);
  }
  return bary;
}

}  // namespace mmot
