#include "mmot/monge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mmot {

TwoPointResult two_point_monge(const Instance& instance, std::int64_t cap) {
  validate(instance);
  if (instance.support_size() != 2)
    throw NotTwoPoint("two-point construction requires m = 2, got m = " +
                      std::to_string(instance.support_size()));
  const int N = instance.num_marginals();
  const int d = instance.dim();
  if (N > 1 && (std::int64_t(1) << (N - 1)) > cap)
    throw EnumerationOverflow("2^(N-1) sign choices exceed the enumeration cap");

  auto [centered, means] = center(instance);

  // Fix the first marginal's atom; scan sign choices for the rest in
  // lexicographic order so ties resolve to the smallest assignment.
  const std::int64_t choices = N > 1 ? (std::int64_t(1) << (N - 1)) : 1;
  std::vector<int> best_alpha(N, 0);
  double best_norm = -1.0;
  std::vector<double> sum(d);
  for (std::int64_t b = 0; b < choices; ++b) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::vector<int> alpha(N, 0);
    for (int i = 1; i < N; ++i) alpha[i] = static_cast<int>((b >> (N - 1 - i)) & 1);
    for (int i = 0; i < N; ++i) {
      const auto& p = centered.marginals[i].points[alpha[i]];
      for (int j = 0; j < d; ++j) sum[j] += p[j];
    }
    double norm_sq = 0.0;
    for (double c : sum) norm_sq += c * c;
    if (norm_sq > best_norm) {
      best_norm = norm_sq;
      best_alpha = alpha;
    }
  }

  TwoPointResult result;
  for (int i = 1; i < N; ++i) {
    if (best_alpha[i] == 0)
      result.assignment.sigmas.push_back({0, 1});
    else
      result.assignment.sigmas.push_back({1, 0});
  }

  // Report the cost of the induced plan on the original, uncentered points.
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const IndexTuple tuple = result.assignment.tuple_at(k);
    std::vector<std::vector<double>> pts(N);
    for (int i = 0; i < N; ++i) pts[i] = instance.marginals[i].points[tuple[i]];
    total += pairwise_cost(pts);
  }
  result.value = total / 2.0;
  return result;
}

MongeAssignment monotone_1d(const Instance& instance) {
  validate(instance);
  if (instance.dim() != 1)
    throw NotOneDimensional("monotone matching requires d = 1, got d = " +
                            std::to_string(instance.dim()));
  const int N = instance.num_marginals();
  const int m = instance.support_size();

  std::vector<std::vector<int>> sorted(N);
  for (int i = 0; i < N; ++i) {
    sorted[i].resize(m);
    std::iota(sorted[i].begin(), sorted[i].end(), 0);
    const auto& pts = instance.marginals[i].points;
    std::stable_sort(sorted[i].begin(), sorted[i].end(),
                     [&pts](int a, int b) { return pts[a][0] < pts[b][0]; });
  }

  MongeAssignment assignment;
  assignment.sigmas.assign(N - 1, std::vector<int>(m));
  for (int r = 0; r < m; ++r) {
    const int k = sorted[0][r];
    for (int i = 1; i < N; ++i) assignment.sigmas[i - 1][k] = sorted[i][r];
  }
  return assignment;
}

}  // namespace mmot
