#pragma once

#include <utility>
#include <vector>

namespace mmot {

/// Uniform probability measure on m points in R^d. Atom weights are
/// implicitly 1/m and never stored. Atom order is significant: indices are
/// the identity of atoms and are never re-sorted.
struct EmpiricalMeasure {
  std::vector<std::vector<double>> points;

  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

/// N empirical marginals sharing the same support size m and dimension d.
struct Instance {
  std::vector<EmpiricalMeasure> marginals;

  int num_marginals() const { return static_cast<int>(marginals.size()); }
  int support_size() const { return marginals.empty() ? 0 : marginals.front().size(); }
  int dim() const { return marginals.empty() ? 0 : marginals.front().dim(); }
};

/// Per-marginal second moments S_i = (1/m) sum_k |x_i^k|^2 and their sum.
struct Moments {
  std::vector<double> per_marginal_second_moment;
  double total = 0.0;
};

/// Checks all instance invariants and returns the instance unchanged.
/// Throws EmptyMeasure, DimensionMismatch, SupportSizeMismatch or
/// NonFiniteCoordinate.
const Instance& validate(const Instance& instance);

/// Shifts every marginal to zero mean. Returns the centered instance and the
/// N subtracted mean vectors.
std::pair<Instance, std::vector<std::vector<double>>> center(const Instance& instance);

Moments moments(const Instance& instance);

}  // namespace mmot
