#include "mmot/measures.hpp"

#include <cmath>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

const Instance& validate(const Instance& instance) {
  if (instance.marginals.empty()) throw EmptyMeasure("instance has no marginals");
  const int m = instance.marginals.front().size();
  const int d = instance.marginals.front().dim();
  for (std::size_t i = 0; i < instance.marginals.size(); ++i) {
    const auto& mu = instance.marginals[i];
    if (mu.size() == 0) throw EmptyMeasure("marginal " + std::to_string(i) + " is empty");
    if (mu.size() != m) {
      throw SupportSizeMismatch("marginal " + std::to_string(i) + " has " +
                                std::to_string(mu.size()) + " atoms, expected " + std::to_string(m));
    }
    for (const auto& p : mu.points) {
      if (static_cast<int>(p.size()) != d) {
        throw DimensionMismatch("marginal " + std::to_string(i) + " mixes dimensions " +
                                std::to_string(p.size()) + " and " + std::to_string(d));
      }
      for (double c : p) {
        if (!std::isfinite(c)) {
          throw NonFiniteCoordinate("marginal " + std::to_string(i) + " has a non-finite coordinate");
        }
      }
    }
  }
  return instance;
}

std::pair<Instance, std::vector<std::vector<double>>> center(const Instance& instance) {
  validate(instance);
  const int d = instance.dim();
  Instance shifted = instance;
  std::vector<std::vector<double>> means;
  means.reserve(instance.marginals.size());
  for (auto& mu : shifted.marginals) {
    std::vector<double> mean(d, 0.0);
    for (const auto& p : mu.points)
      for (int j = 0; j < d; ++j) mean[j] += p[j];
    for (int j = 0; j < d; ++j) mean[j] /= mu.size();
    for (auto& p : mu.points)
      for (int j = 0; j < d; ++j) p[j] -= mean[j];
    means.push_back(std::move(mean));
  }
  return {std::move(shifted), std::move(means)};
}

Moments moments(const Instance& instance) {
  validate(instance);
  Moments out;
  for (const auto& mu : instance.marginals) {
    double s = 0.0;
    for (const auto& p : mu.points)
      for (double c : p) s += c * c;
    s /= mu.size();
    out.per_marginal_second_moment.push_back(s);
    out.total += s;
  }
  return out;
}

}  // namespace mmot
