#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/measures.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/rational.hpp"

namespace mmot {

/// PairwiseUnordered sums |x_i - x_j|^2 over unordered pairs i < j; this is
/// the convention under which all costs are reported. NegSquaredSum uses
/// -|sum_i x_i|^2, which differs from it by a plan-independent constant
/// N * moments(instance).total and therefore has the same minimizers.
enum class CostConvention { PairwiseUnordered, NegSquaredSum };

inline std::string to_string(CostConvention c) {
  return c == CostConvention::PairwiseUnordered ? "pairwise" : "negsum";
}

/// Dense cost tensor with m^N entries, row-major, first index slowest.
template <typename T>
struct CostTensor {
  std::vector<int> shape;  // N entries, all equal to m
  CostConvention convention = CostConvention::PairwiseUnordered;
  std::vector<T> values;

  const T& at_flat(std::int64_t f) const { return values[f]; }
  const T& at(const IndexTuple& tuple) const { return values[MultiIndex(shape).flat(tuple)]; }
};

namespace detail {

template <typename T>
T squared_distance(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("points of different dimension");
  T s{};
  for (std::size_t j = 0; j < a.size(); ++j) {
    const T diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

template <typename T>
T pairwise_cost_impl(const std::vector<std::vector<T>>& pts) {
  T s{};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) s += squared_distance(pts[i], pts[j]);
  return s;
}

template <typename T>
T negsum_cost_impl(const std::vector<std::vector<T>>& pts) {
  if (pts.empty()) return T{};
  std::vector<T> total(pts.front().size(), T{});
  for (const auto& p : pts) {
    if (p.size() != total.size()) throw DimensionMismatch("points of different dimension");
    for (std::size_t j = 0; j < p.size(); ++j) total[j] += p[j];
  }
  T s{};
  for (const T& c : total) s += c * c;
  return -s;
}

}  // namespace detail

/// Sum of squared Euclidean distances over unordered pairs.
inline double pairwise_cost(const std::vector<std::vector<double>>& pts) {
  return detail::pairwise_cost_impl(pts);
}
inline Rational pairwise_cost(const std::vector<std::vector<Rational>>& pts) {
  return detail::pairwise_cost_impl(pts);
}

/// -|sum_i x_i|^2.
inline double negsum_cost(const std::vector<std::vector<double>>& pts) {
  return detail::negsum_cost_impl(pts);
}
inline Rational negsum_cost(const std::vector<std::vector<Rational>>& pts) {
  return detail::negsum_cost_impl(pts);
}

inline constexpr std::int64_t kDefaultTensorCap = 10'000'000;

namespace detail {

template <typename T, typename PointConv>
CostTensor<T> build_tensor_impl(const Instance& instance, CostConvention convention,
                                std::int64_t cap, PointConv convert) {
  validate(instance);
  const int num_marginals = instance.num_marginals();
  const int m = instance.support_size();

  std::int64_t entries = 1;
  for (int i = 0; i < num_marginals; ++i) {
    if (entries > cap / m) throw SizeOverflow("cost tensor would exceed " + std::to_string(cap) + " entries");
    entries *= m;
  }

  std::vector<std::vector<std::vector<T>>> points(num_marginals);
  for (int i = 0; i < num_marginals; ++i)
    for (const auto& p : instance.marginals[i].points) points[i].push_back(convert(p));

  CostTensor<T> tensor;
  tensor.shape.assign(num_marginals, m);
  tensor.convention = convention;
  tensor.values.resize(entries);

  MultiIndex idx(tensor.shape);
  IndexTuple tuple(num_marginals, 0);
  std::vector<std::vector<T>> selected(num_marginals);
  std::int64_t f = 0;
  do {
    for (int i = 0; i < num_marginals; ++i) selected[i] = points[i][tuple[i]];
    tensor.values[f++] = convention == CostConvention::PairwiseUnordered
                             ? detail::pairwise_cost_impl(selected)
                             : detail::negsum_cost_impl(selected);
  } while (idx.next(tuple));
  return tensor;
}

}  // namespace detail

/// Materializes the full cost tensor in float arithmetic.
inline CostTensor<double> build_tensor(const Instance& instance,
                                       CostConvention convention = CostConvention::PairwiseUnordered,
                                       std::int64_t cap = kDefaultTensorCap) {
  return detail::build_tensor_impl<double>(instance, convention, cap,
                                           [](const std::vector<double>& p) { return p; });
}

/// Materializes the cost tensor in exact rational arithmetic; float
/// coordinates are converted losslessly.
inline CostTensor<Rational> build_tensor_exact(const Instance& instance,
                                               CostConvention convention = CostConvention::PairwiseUnordered,
                                               std::int64_t cap = kDefaultTensorCap) {
  return detail::build_tensor_impl<Rational>(instance, convention, cap,
                                             [](const std::vector<double>& p) { return to_rational(p); });
}

}  // namespace mmot
