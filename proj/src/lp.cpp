#include "plankline/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plankline {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

namespace {

/// max c'x s.t. Ax <= b, x >= 0, on a (m+2) x (n+2) tableau. Column n carries
/// the phase-one artificial, column n+1 the right-hand side; row m is the
/// objective and row m+1 the phase-one objective. Labels 0..n-1 are structural
/// variables, n..n+m-1 slacks, -1 the artificial.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c,
          const LpOptions& opt)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), w_(n_ + 2), opt_(opt) {
    D_.assign(static_cast<size_t>(m_ + 2) * w_, 0.0);
    N_.resize(n_ + 1);
    B_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = A[i][j];
      B_[i] = n_ + i;
      at(i, n_) = -1;
      at(i, n_ + 1) = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      N_[j] = j;
      at(m_, j) = -c[j];
    }
    N_[n_] = -1;
    at(m_ + 1, n_) = 1;
  }

  LpStatus solve() {
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -opt_.eps) {
      pivot(r, n_);
      LpStatus st = simplex(2);
      if (st == LpStatus::iteration_limit) return st;
      if (st != LpStatus::optimal || at(m_ + 1, n_ + 1) < -opt_.eps) return LpStatus::infeasible;
      for (int i = 0; i < m_; ++i)
        if (B_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j)
            if (at(i, j) < at(i, s) || (at(i, j) == at(i, s) && N_[j] < N_[s])) s = j;
          pivot(i, s);
        }
    }
    return simplex(1);
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (B_[i] >= 0 && B_[i] < n_) x[B_[i]] = at(i, n_ + 1);
    return x;
  }

  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (int j = 0; j <= n_; ++j)
      if (N_[j] >= n_) y[N_[j] - n_] = at(m_, j);
    return y;
  }

  double value() const { return at(m_, n_ + 1); }
  long iterations() const { return iterations_; }

 private:
  double& at(int i, int j) { return D_[static_cast<size_t>(i) * w_ + j]; }
  double at(int i, int j) const { return D_[static_cast<size_t>(i) * w_ + j]; }

  void pivot(int r, int s) {
    ++iterations_;
    double* a = &at(r, 0);
    const double inv = 1.0 / a[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row = &at(i, 0);
      if (row[s] == 0.0) continue;
      const double f = row[s] * inv;
      for (int j = 0; j < w_; ++j) row[j] -= a[j] * f;
      row[s] = a[s] * f;
    }
    for (int j = 0; j < w_; ++j)
      if (j != s) a[j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) at(i, s) *= -inv;
    a[s] = inv;
    std::swap(B_[r], N_[s]);
  }

  LpStatus simplex(int phase) {
    const int x = m_ + phase - 1;
    int streak = 0;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
      const bool bland = streak >= opt_.degeneracy_streak;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (N_[j] == -phase) continue;
        const double d = at(x, j);
        if (bland) {
          if (d < -opt_.eps && (s == -1 || N_[j] < N_[s])) s = j;
        } else if (s == -1 || d < at(x, s) || (d == at(x, s) && N_[j] < N_[s])) {
          s = j;
        }
      }
      if (s == -1 || at(x, s) >= -opt_.eps) return LpStatus::optimal;
      int r = -1;
      double best = 0;
      for (int i = 0; i < m_; ++i) {
        const double d = at(i, s);
        if (d <= opt_.eps) continue;
        const double ratio = at(i, n_ + 1) / d;
        if (r == -1 || ratio < best || (ratio == best && B_[i] < B_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == -1) return LpStatus::unbounded;
      streak = best <= opt_.eps ? streak + 1 : 0;
      pivot(r, s);
    }
  }

  int m_, n_, w_;
  LpOptions opt_;
  std::vector<double> D_;
  std::vector<int> N_, B_;
  long iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  const std::size_t n = lp.variables();
  std::vector<double> lower = lp.lower_bounds;
  if (lower.empty()) lower.assign(n, 0.0);
  if (lower.size() != n) throw std::invalid_argument("lower_bounds size does not match objective");
  const double sign = lp.sense == Sense::maximize ? 1.0 : -1.0;

  // Standard form over x' = x - lower.
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  struct RowRef {
    std::size_t original;
    double factor;
  };
  std::vector<RowRef> refs;
  for (std::size_t k = 0; k < lp.constraints.size(); ++k) {
    const auto& con = lp.constraints[k];
    if (con.coeffs.size() != n) throw std::invalid_argument("constraint width does not match objective");
    double rhs = con.rhs;
    for (std::size_t j = 0; j < n; ++j) rhs -= con.coeffs[j] * lower[j];
    if (!std::isfinite(rhs)) throw std::invalid_argument("non-finite constraint data");
    auto push = [&](double f) {
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = f * con.coeffs[j];
      A.push_back(std::move(row));
      b.push_back(f * rhs);
      refs.push_back({k, f});
    };
    if (con.relation != Relation::ge) push(1.0);
    if (con.relation != Relation::le) push(-1.0);
  }
  std::vector<double> c(n);
  double offset = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.objective[j])) throw std::invalid_argument("non-finite objective");
    c[j] = sign * lp.objective[j];
    offset += lp.objective[j] * lower[j];
  }

  Tableau t(A, b, c, options);
  LpSolution sol;
  sol.status = t.solve();
  sol.iterations = t.iterations();
  if (sol.status != LpStatus::optimal) return sol;
  sol.values = t.primal();
  for (std::size_t j = 0; j < n; ++j) sol.values[j] += lower[j];
  sol.objective = sign * t.value() + offset;
  auto y = t.duals();
  sol.duals.assign(lp.constraints.size(), 0.0);
  for (std::size_t r = 0; r < refs.size(); ++r) sol.duals[refs[r].original] += sign * refs[r].factor * y[r];
  return sol;
}

}  // namespace plankline
