#include "mmot/barycenter.hpp"

#include <cmath>
#include <string>

#include "mmot/cost.hpp"

namespace mmot {

namespace {

double w2_squared_impl(const std::vector<std::vector<double>>& a, const std::vector<double>& wa,
                       const std::vector<std::vector<double>>& b, const std::vector<double>& wb,
                       const SolverConfig& config) {
  if (a.empty() || b.empty()) throw EmptyMeasure("transport between empty supports");
  const std::size_t d = a.front().size();
  for (const auto& p : a)
    if (p.size() != d) throw DimensionMismatch("left support mixes dimensions");
  for (const auto& p : b)
    if (p.size() != d) throw DimensionMismatch("right support mixes dimensions");
  if (!b.empty() && b.front().size() != d)
    throw DimensionMismatch("supports live in different dimensions");

  double mass_a = 0.0, mass_b = 0.0;
  for (double w : wa) mass_a += w;
  for (double w : wb) {
    if (w <= 0.0) throw InvalidConfig("atom weights must be positive");
    mass_b += w;
  }
  if (std::abs(mass_a - 1.0) > 1e-9 || std::abs(mass_b - 1.0) > 1e-9)
    throw InvalidConfig("measures must have unit total mass");

  TransportProblem<double> problem;
  problem.sizes = {static_cast<int>(a.size()), static_cast<int>(b.size())};
  problem.weights = {wa, wb};
  problem.cost.resize(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = a[i][c] - b[j][c];
        s += diff * diff;
      }
      problem.cost[i * b.size() + j] = s;
    }
  return solve_transport(problem, config).value;
}

std::vector<double> uniform_weights(int m) { return std::vector<double>(m, 1.0 / m); }

}  // namespace

double w2_squared(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                  const SolverConfig& config) {
  if (mu.dim() != nu.dim()) throw DimensionMismatch("measures live in different dimensions");
  return w2_squared_impl(mu.points, uniform_weights(mu.size()), nu.points,
                         uniform_weights(nu.size()), config);
}

double w2_squared(const EmpiricalMeasure& mu, const DiscreteBarycenter& nu,
                  const SolverConfig& config) {
  std::vector<std::vector<double>> pts;
  std::vector<double> wts;
  for (const auto& [p, w] : nu.atoms) {
    pts.push_back(p);
    wts.push_back(w);
  }
  if (!pts.empty() && mu.dim() != static_cast<int>(pts.front().size()))
    throw DimensionMismatch("measures live in different dimensions");
  return w2_squared_impl(mu.points, uniform_weights(mu.size()), pts, wts, config);
}

double barycenter_functional(const Instance& instance, const DiscreteBarycenter& nu,
                             const SolverConfig& config) {
  validate(instance);
  double total = 0.0;
  for (const auto& mu : instance.marginals) total += w2_squared(mu, nu, config);
  return total;
}

double barycenter_functional(const Instance& instance, const EmpiricalMeasure& nu,
                             const SolverConfig& config) {
  validate(instance);
  double total = 0.0;
  for (const auto& mu : instance.marginals) total += w2_squared(mu, nu, config);
  return total;
}

}  // namespace mmot
