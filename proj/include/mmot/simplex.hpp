#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/measures.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/rational.hpp"

namespace mmot {

struct SolverConfig {
  double pivot_tol = 1e-10;   // minimum pivot magnitude in the ratio test
  double feas_tol = 1e-9;     // primal feasibility tolerance
  double opt_tol = 1e-9;      // reduced-cost optimality tolerance
  double support_tol = 1e-12; // basic values below this are reported as zero
  long long dantzig_iterations = 2000;  // pivots before switching to Bland's rule
  long long iteration_limit = 200000;
  int refactor_interval = 64;
};

/// Equality-form transport LP over marginals of possibly different support
/// sizes and weights. Columns are index tuples; the cost array is dense,
/// row-major with the first index slowest. The uniform multi-marginal
/// problem is the special case of equal sizes and weights 1/m.
template <typename T>
struct TransportProblem {
  std::vector<int> sizes;
  std::vector<std::vector<T>> weights;
  std::vector<T> cost;

  int num_marginals() const { return static_cast<int>(sizes.size()); }
};

template <typename T>
struct TransportSolution {
  std::vector<std::pair<std::int64_t, T>> support;  // flat column -> weight, ascending ids
  T value{};
  std::vector<std::vector<T>> potentials;  // one list per marginal
  long long iterations = 0;
};

namespace detail {

template <typename T>
constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// The marginal constraints have rank sum(m_i) - (N - 1): one row per
/// marginal is redundant since each row block sums to the total mass.
/// We keep all rows of the first marginal and drop the last row of every
/// other, which leaves a full-rank system.
struct RowLayout {
  std::vector<int> offsets;
  std::vector<int> sizes;
  int rows = 0;

  explicit RowLayout(const std::vector<int>& marginal_sizes) : sizes(marginal_sizes) {
    offsets.resize(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      offsets[i] = rows;
      rows += i == 0 ? sizes[i] : sizes[i] - 1;
    }
  }

  // -1 when the row is dropped
  int row(int marginal, int atom) const {
    if (marginal > 0 && atom == sizes[marginal] - 1) return -1;
    return offsets[marginal] + atom;
  }
};

template <typename T>
class TransportSimplex {
 public:
  TransportSimplex(const TransportProblem<T>& problem, const SolverConfig& config)
      : p_(problem), cfg_(config), index_(problem.sizes), layout_(problem.sizes) {
    n_ = index_.count();
    rows_ = layout_.rows;
    b_.resize(rows_);
    for (int i = 0; i < p_.num_marginals(); ++i)
      for (int k = 0; k < p_.sizes[i]; ++k)
        if (int r = layout_.row(i, k); r >= 0) b_[r] = p_.weights[i][k];
  }

  TransportSolution<T> solve(const std::vector<std::pair<std::int64_t, T>>& start) {
    build_initial_basis(start);
    refresh();

    long long iter = 0;
    bool fresh = true;
    for (;;) {
      if (!is_exact && !fresh && iter % cfg_.refactor_interval == 0) {
        refresh();
        fresh = true;
      }
      const bool bland = iter >= cfg_.dantzig_iterations;
      std::int64_t entering = price(bland);
      if (entering < 0) {
        if (!is_exact && !fresh) {
          refresh();
          fresh = true;
          continue;  // confirm optimality against a clean factorization
        }
        break;
      }
      pivot(entering, bland);
      fresh = false;
      if (++iter > cfg_.iteration_limit)
        throw IterationLimit("simplex exceeded " + std::to_string(cfg_.iteration_limit) + " pivots");
    }

    return extract(iter);
  }

 private:
  static constexpr bool is_exact = is_exact_v<T>;

  bool is_negative(const T& v) const {
    if constexpr (is_exact) return v < 0;
    else return v < -cfg_.opt_tol;
  }
  bool pivot_eligible(const T& v) const {
    if constexpr (is_exact) return v > 0;
    else return v > cfg_.pivot_tol;
  }

  std::vector<int> column_rows(std::int64_t flat) const {
    std::vector<int> rows;
    rows.reserve(p_.num_marginals());
    IndexTuple tuple = index_.unflat(flat);
    for (int i = 0; i < p_.num_marginals(); ++i)
      if (int r = layout_.row(i, tuple[i]); r >= 0) rows.push_back(r);
    return rows;
  }

  /// Greedy Gauss-Jordan completion: accept the start columns, then scan all
  /// columns in flat order until the basis has full rank. Echelon columns are
  /// kept fully reduced so one forward pass eliminates each candidate.
  void build_initial_basis(const std::vector<std::pair<std::int64_t, T>>& start) {
    basis_.clear();
    std::vector<std::vector<T>> echelon;  // reduced candidate columns
    std::vector<int> pivot_rows;
    std::vector<char> is_pivot_row(rows_, 0);

    auto try_accept = [&](std::int64_t flat) {
      std::vector<T> v(rows_, T{});
      for (int r : column_rows(flat)) v[r] = T(1);
      for (std::size_t k = 0; k < echelon.size(); ++k) {
        const T factor = v[pivot_rows[k]];
        if (factor != T{})
          for (int r = 0; r < rows_; ++r) v[r] -= factor * echelon[k][r];
      }
      int piv = -1;
      if constexpr (is_exact) {
        for (int r = 0; r < rows_; ++r)
          if (!is_pivot_row[r] && v[r] != 0) { piv = r; break; }
      } else {
        double best = 1e-7;  // 0/1 incidence columns keep elimination well conditioned
        for (int r = 0; r < rows_; ++r)
          if (!is_pivot_row[r] && std::abs(v[r]) > best) { best = std::abs(v[r]); piv = r; }
      }
      if (piv < 0) return false;
      const T inv = T(1) / v[piv];
      for (int r = 0; r < rows_; ++r) v[r] *= inv;
      for (std::size_t k = 0; k < echelon.size(); ++k) {
        const T factor = echelon[k][piv];
        if (factor != T{})
          for (int r = 0; r < rows_; ++r) echelon[k][r] -= factor * v[r];
      }
      echelon.push_back(std::move(v));
      pivot_rows.push_back(piv);
      is_pivot_row[piv] = 1;
      basis_.push_back(flat);
      return true;
    };

    std::vector<char> in_basis_hint;
    for (const auto& [flat, weight] : start) {
      (void)weight;
      if (!try_accept(flat))
        throw InternalSolverError("starting coupling columns are linearly dependent");
    }
    for (std::int64_t j = 0; j < n_ && static_cast<int>(basis_.size()) < rows_; ++j) {
      if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
      try_accept(j);
    }
    if (static_cast<int>(basis_.size()) != rows_)
      throw InternalSolverError("could not complete a starting basis");
    (void)in_basis_hint;

    x_.assign(rows_, T{});
    for (const auto& [flat, weight] : start) {
      auto slot = std::find(basis_.begin(), basis_.end(), flat) - basis_.begin();
      x_[slot] = weight;
    }
  }

  /// Recompute the basis inverse and basic values from scratch.
  void refresh() {
    const int R = rows_;
    std::vector<T> work(static_cast<std::size_t>(R) * 2 * R, T{});
    auto at = [&](int r, int c) -> T& { return work[static_cast<std::size_t>(r) * 2 * R + c]; };
    for (int s = 0; s < R; ++s)
      for (int r : column_rows(basis_[s])) at(r, s) = T(1);
    for (int r = 0; r < R; ++r) at(r, R + r) = T(1);

    for (int col = 0; col < R; ++col) {
      int piv = -1;
      if constexpr (is_exact) {
        for (int r = col; r < R; ++r)
          if (at(r, col) != 0) { piv = r; break; }
      } else {
        double best = 0.0;
        for (int r = col; r < R; ++r)
          if (std::abs(at(r, col)) > best) { best = std::abs(at(r, col)); piv = r; }
        if (best < 1e-12) piv = -1;
      }
      if (piv < 0) throw InternalSolverError("singular basis matrix");
      if (piv != col)
        for (int c = 0; c < 2 * R; ++c) std::swap(at(piv, c), at(col, c));
      const T inv = T(1) / at(col, col);
      for (int c = 0; c < 2 * R; ++c) at(col, c) *= inv;
      for (int r = 0; r < R; ++r) {
        if (r == col) continue;
        const T factor = at(r, col);
        if (factor != T{})
          for (int c = 0; c < 2 * R; ++c) at(r, c) -= factor * at(col, c);
      }
    }

    binv_.assign(static_cast<std::size_t>(R) * R, T{});
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < R; ++c) binv_[static_cast<std::size_t>(r) * R + c] = at(r, R + c);

    x_.assign(R, T{});
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < R; ++c) x_[r] += binv_[static_cast<std::size_t>(r) * R + c] * b_[c];
    for (int r = 0; r < R; ++r) {
      if constexpr (!is_exact) {
        if (x_[r] < -cfg_.feas_tol) throw InternalSolverError("basic solution lost feasibility");
        if (x_[r] < T{}) x_[r] = T{};
      } else {
        if (x_[r] < 0) throw InternalSolverError("basic solution lost feasibility");
      }
    }
  }

  /// Row duals y = c_B^T B^{-1}, exposed per (marginal, atom) for pricing.
  void compute_duals() {
    y_.assign(rows_, T{});
    for (int s = 0; s < rows_; ++s) {
      const T& cb = p_.cost[basis_[s]];
      if (cb != T{})
        for (int r = 0; r < rows_; ++r) y_[r] += cb * binv_[static_cast<std::size_t>(s) * rows_ + r];
    }
    upot_.assign(p_.num_marginals(), {});
    for (int i = 0; i < p_.num_marginals(); ++i) {
      upot_[i].assign(p_.sizes[i], T{});
      for (int k = 0; k < p_.sizes[i]; ++k)
        if (int r = layout_.row(i, k); r >= 0) upot_[i][k] = y_[r];
    }
  }

  /// Entering column: Bland takes the first improving flat id, Dantzig the
  /// most negative reduced cost (ties to the smaller id). Returns -1 at
  /// optimality.
  std::int64_t price(bool bland) {
    compute_duals();
    const int N = p_.num_marginals();
    IndexTuple tuple(N, 0);
    std::int64_t best = -1;
    T best_rc{};
    std::int64_t j = 0;
    do {
      T rc = p_.cost[j];
      for (int i = 0; i < N; ++i) rc -= upot_[i][tuple[i]];
      if (is_negative(rc)) {
        if (bland) return j;
        if (best < 0 || rc < best_rc) {
          best = j;
          best_rc = rc;
        }
      }
      ++j;
    } while (index_.next(tuple));
    return best;
  }

  void pivot(std::int64_t entering, bool bland) {
    const int R = rows_;
    std::vector<T> d(R, T{});
    for (int r : column_rows(entering))
      for (int i = 0; i < R; ++i) d[i] += binv_[static_cast<std::size_t>(i) * R + r];

    int leave = -1;
    T theta{};
    for (int r = 0; r < R; ++r) {
      if (!pivot_eligible(d[r])) continue;
      T ratio = x_[r] / d[r];
      if (ratio < T{}) ratio = T{};  // degenerate negative roundoff
      if (leave < 0 || ratio < theta ||
          (ratio == theta && basis_[r] < basis_[leave])) {
        leave = r;
        theta = ratio;
      }
    }
    (void)bland;  // the smallest-basis-id tie break above is already Bland's
    if (leave < 0) throw InternalSolverError("unbounded direction in a bounded transport polytope");

    const T inv = T(1) / d[leave];
    for (int c = 0; c < R; ++c) binv_[static_cast<std::size_t>(leave) * R + c] *= inv;
    for (int r = 0; r < R; ++r) {
      if (r == leave) continue;
      const T factor = d[r];
      if (factor != T{})
        for (int c = 0; c < R; ++c)
          binv_[static_cast<std::size_t>(r) * R + c] -=
              factor * binv_[static_cast<std::size_t>(leave) * R + c];
    }
    for (int r = 0; r < R; ++r) {
      if (r == leave) continue;
      x_[r] -= theta * d[r];
      if constexpr (!is_exact) {
        if (x_[r] < T{}) x_[r] = T{};
      }
    }
    x_[leave] = theta;
    basis_[leave] = entering;
  }

  TransportSolution<T> extract(long long iterations) {
    if constexpr (!is_exact) refresh();
    TransportSolution<T> out;
    out.iterations = iterations;

    std::vector<std::pair<std::int64_t, T>> support;
    for (int r = 0; r < rows_; ++r) {
      bool positive;
      if constexpr (is_exact) positive = x_[r] > 0;
      else positive = x_[r] > cfg_.support_tol;
      if (positive) support.emplace_back(basis_[r], x_[r]);
    }
    std::sort(support.begin(), support.end());
    out.support = std::move(support);

    out.value = T{};
    for (const auto& [flat, w] : out.support) out.value += p_.cost[flat] * w;

    compute_duals();
    out.potentials = upot_;
    return out;
  }

  const TransportProblem<T>& p_;
  SolverConfig cfg_;
  MultiIndex index_;
  RowLayout layout_;
  std::int64_t n_ = 0;
  int rows_ = 0;
  std::vector<T> b_;
  std::vector<std::int64_t> basis_;
  std::vector<T> binv_;  // rows x rows, row-major
  std::vector<T> x_;     // basic values, one per basis slot
  std::vector<T> y_;     // row duals
  std::vector<std::vector<T>> upot_;
};

/// Feasible starting point for arbitrary sizes and weights: walk the index
/// pointers forward, always assigning the largest mass the current atoms
/// allow. The result is a vertex of the transport polytope.
template <typename T>
std::vector<std::pair<std::int64_t, T>> northwest_start(const TransportProblem<T>& p) {
  const int N = p.num_marginals();
  MultiIndex index(p.sizes);
  std::vector<int> ptr(N, 0);
  std::vector<T> residual(N);
  for (int i = 0; i < N; ++i) residual[i] = p.weights[i][0];

  const double cutoff = 1e-15;
  std::vector<std::pair<std::int64_t, T>> start;
  for (;;) {
    T t = residual[0];
    for (int i = 1; i < N; ++i) t = std::min(t, residual[i]);
    bool record;
    if constexpr (is_exact_v<T>) record = t > 0;
    else record = t > cutoff;
    if (record) {
      start.emplace_back(index.flat(IndexTuple(ptr.begin(), ptr.end())), t);
      for (int i = 0; i < N; ++i) residual[i] -= t;
    }
    bool advanced = false, done = false;
    for (int i = 0; i < N; ++i) {
      bool exhausted;
      if constexpr (is_exact_v<T>) exhausted = residual[i] == 0;
      else exhausted = residual[i] <= cutoff;
      if (exhausted) {
        if (ptr[i] + 1 >= p.sizes[i]) { done = true; continue; }
        ++ptr[i];
        residual[i] = p.weights[i][ptr[i]];
        advanced = true;
      }
    }
    if (done || !advanced) break;
  }
  std::sort(start.begin(), start.end());
  return start;
}

}  // namespace detail

/// Solves a generalized transport LP from a caller-supplied starting
/// coupling (or the northwest-corner start when none is given).
template <typename T>
TransportSolution<T> solve_transport(const TransportProblem<T>& problem,
                                     const SolverConfig& config = {},
                                     std::vector<std::pair<std::int64_t, T>> start = {}) {
  if (start.empty()) start = detail::northwest_start(problem);
  detail::TransportSimplex<T> solver(problem, config);
  return solver.solve(start);
}

// ---------------------------------------------------------------------------
// Uniform multi-marginal layer
// ---------------------------------------------------------------------------

/// Sparse transport plan: positive weights on index tuples, total mass 1.
template <typename T>
struct Coupling {
  std::map<IndexTuple, T> entries;
};

/// Potentials u_i(k) with sum_i u_i(a_i) <= c_a everywhere and equality on
/// the plan's support; their weighted sum equals the primal value.
template <typename T>
struct DualCertificate {
  std::vector<std::vector<T>> potentials;
  T dual_objective{};
};

template <typename T>
struct LPSolution {
  Coupling<T> coupling;
  T value{};
  DualCertificate<T> certificate;
  long long iterations = 0;
};

struct CouplingReport {
  double max_violation = 0.0;    // worst of negativity, mass and marginal errors
  double mass_error = 0.0;       // |total mass - 1|
  double max_marginal_error = 0.0;
  double min_weight = 0.0;
};

template <typename T>
struct CertificateReport {
  T max_feasibility_violation{};  // max over tuples of sum_i u_i(a_i) - c_a
  T max_slackness_gap{};          // max over support of |c_a - sum_i u_i(a_i)|
  T duality_gap{};                // |primal - dual objective|
};

namespace detail {

template <typename T>
TransportProblem<T> uniform_problem(const Instance& instance, const CostTensor<T>& tensor) {
  const int N = instance.num_marginals();
  const int m = instance.support_size();
  if (static_cast<int>(tensor.shape.size()) != N ||
      std::any_of(tensor.shape.begin(), tensor.shape.end(), [m](int s) { return s != m; }))
    throw InvalidConfig("cost tensor shape does not match the instance");
  TransportProblem<T> p;
  p.sizes = tensor.shape;
  T w;
  if constexpr (is_exact_v<T>) w = T(1) / m;
  else w = 1.0 / m;
  p.weights.assign(N, std::vector<T>(m, w));
  p.cost = tensor.values;
  return p;
}

template <typename T>
T abs_value(const T& v) {
  if constexpr (is_exact_v<T>) return v < 0 ? T(-v) : v;
  else return std::abs(v);
}

}  // namespace detail

/// Independent re-check of a dual certificate against every tuple of the
/// tensor and the support of the coupling.
template <typename T>
CertificateReport<T> verify_certificate(const CostTensor<T>& tensor, const Coupling<T>& coupling,
                                        const DualCertificate<T>& certificate) {
  MultiIndex index(tensor.shape);
  const int N = static_cast<int>(tensor.shape.size());
  CertificateReport<T> report;

  IndexTuple tuple(N, 0);
  std::int64_t j = 0;
  do {
    T slack = -tensor.values[j];
    for (int i = 0; i < N; ++i) slack += certificate.potentials[i][tuple[i]];
    report.max_feasibility_violation = std::max(report.max_feasibility_violation, slack);
    ++j;
  } while (index.next(tuple));

  T primal{};
  for (const auto& [t, w] : coupling.entries) {
    T gap = tensor.at(t);
    for (int i = 0; i < N; ++i) gap -= certificate.potentials[i][t[i]];
    report.max_slackness_gap = std::max(report.max_slackness_gap, detail::abs_value(gap));
    primal += tensor.at(t) * w;
  }
  report.duality_gap = detail::abs_value(primal - certificate.dual_objective);
  return report;
}

/// Feasibility report for a coupling against the uniform marginals of an
/// instance: nonnegativity, unit mass, and all N*m marginal sums.
template <typename T>
CouplingReport verify_coupling(const Instance& instance, const Coupling<T>& coupling) {
  validate(instance);
  const int N = instance.num_marginals();
  const int m = instance.support_size();

  CouplingReport report;
  report.min_weight = coupling.entries.empty() ? 0.0 : 1.0;
  std::vector<std::vector<T>> marginal_mass(N, std::vector<T>(m, T{}));
  T mass{};
  for (const auto& [tuple, w] : coupling.entries) {
    if (static_cast<int>(tuple.size()) != N) throw InvalidConfig("coupling tuple has wrong length");
    for (int i = 0; i < N; ++i) {
      if (tuple[i] < 0 || tuple[i] >= m) throw InvalidConfig("coupling tuple index out of range");
      marginal_mass[i][tuple[i]] += w;
    }
    mass += w;
    const double wd = static_cast<double>(w);
    report.min_weight = std::min(report.min_weight, wd);
    if (wd < 0) report.max_violation = std::max(report.max_violation, -wd);
  }
  report.mass_error = std::abs(static_cast<double>(mass) - 1.0);
  report.max_violation = std::max(report.max_violation, report.mass_error);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < m; ++k) {
      const double err = std::abs(static_cast<double>(marginal_mass[i][k]) - 1.0 / m);
      report.max_marginal_error = std::max(report.max_marginal_error, err);
    }
  report.max_violation = std::max(report.max_violation, report.max_marginal_error);
  return report;
}

/// Solves the uniform multi-marginal transport LP with a primal simplex,
/// starting from the identity Monge coupling. Returns a vertex coupling,
/// the optimal value, and a verified dual certificate.
template <typename T>
LPSolution<T> solve_lp(const Instance& instance, const CostTensor<T>& tensor,
                       const SolverConfig& config = {}) {
  validate(instance);
  auto problem = detail::uniform_problem(instance, tensor);
  const int N = instance.num_marginals();
  const int m = instance.support_size();
  MultiIndex index(tensor.shape);

  std::vector<std::pair<std::int64_t, T>> start;
  start.reserve(m);
  for (int k = 0; k < m; ++k) {
    IndexTuple diag(N, k);
    start.emplace_back(index.flat(diag), problem.weights[0][k]);
  }
  std::sort(start.begin(), start.end());

  detail::TransportSimplex<T> solver(problem, config);
  TransportSolution<T> raw = solver.solve(start);

  LPSolution<T> out;
  out.iterations = raw.iterations;
  out.value = raw.value;
  for (const auto& [flat, w] : raw.support) out.coupling.entries[index.unflat(flat)] = w;

  const int bound = N * (m - 1) + 1;
  if (static_cast<int>(out.coupling.entries.size()) > bound)
    throw InternalSolverError("vertex coupling exceeds the support bound");

  out.certificate.potentials = raw.potentials;
  T dual{};
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < m; ++k) dual += problem.weights[i][k] * raw.potentials[i][k];
  out.certificate.dual_objective = dual;

  auto report = verify_certificate(tensor, out.coupling, out.certificate);
  if constexpr (detail::is_exact_v<T>) {
    if (report.max_feasibility_violation > 0 || report.max_slackness_gap != 0 || report.duality_gap != 0)
      throw CertificateInvalid("exact dual certificate failed verification");
  } else {
    double scale = 1.0;
    for (const T& c : tensor.values) scale = std::max(scale, std::abs(c));
    if (static_cast<double>(report.max_feasibility_violation) > config.opt_tol * scale ||
        static_cast<double>(report.max_slackness_gap) > config.opt_tol * scale ||
        static_cast<double>(report.duality_gap) > config.opt_tol * (1.0 + std::abs(static_cast<double>(out.value))))
      throw CertificateInvalid("dual certificate failed verification");
  }
  return out;
}

}  // namespace mmot
