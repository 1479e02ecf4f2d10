#include "credal/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace credal {
namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense tableau simplex for max c'x s.t. Ax <= b, x >= 0 (KACTL formulation).
// Pivot selection breaks ties by variable index, which keeps runs
// deterministic and avoids cycling in practice; a pivot cap backstops the rest.
class Simplex {
 public:
  Simplex(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double> c)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), N_(n_ + 1), B_(m_),
        D_(m_ + 2, std::vector<double>(n_ + 2)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
    for (int i = 0; i < m_; ++i) {
      B_[i] = n_ + i;
      D_[i][n_] = -1;
      D_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      N_[j] = j;
      D_[m_][j] = -c[j];
    }
    N_[n_] = -1;
    D_[m_ + 1][n_] = 1;
  }

  // Returns the objective value; -inf if infeasible, +inf if unbounded.
  double solve(std::vector<double>& x) {
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
    if (D_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!run(2) || D_[m_ + 1][n_ + 1] < -kEps) return -kInf;
      for (int i = 0; i < m_; ++i) {
        if (B_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j)
            if (s == -1 || std::pair(D_[i][j], N_[j]) < std::pair(D_[i][s], N_[s])) s = j;
          pivot(i, s);
        }
      }
    }
    bool ok = run(1);
    x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (B_[i] < n_) x[B_[i]] = D_[i][n_ + 1];
    return ok ? D_[m_][n_ + 1] : kInf;
  }

 private:
  void pivot(int r, int s) {
    double* a = D_[r].data();
    double inv = 1.0 / a[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r && std::fabs(D_[i][s]) > kEps) {
        double* bi = D_[i].data();
        double binv = bi[s] * inv;
        for (int j = 0; j <= n_ + 1; ++j) bi[j] -= a[j] * binv;
        bi[s] = a[s] * binv;
      }
    }
    for (int j = 0; j <= n_ + 1; ++j)
      if (j != s) D_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) D_[i][s] *= -inv;
    D_[r][s] = inv;
    std::swap(B_[r], N_[s]);
  }

  bool run(int phase) {
    int x_row = m_ + phase - 1;
    long pivots = 0;
    const long cap = 200000L + 200L * static_cast<long>(m_ + n_);
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (N_[j] == -phase) continue;
        if (s == -1 || std::pair(D_[x_row][j], N_[j]) < std::pair(D_[x_row][s], N_[s])) s = j;
      }
      if (s == -1 || D_[x_row][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (D_[i][s] <= kEps) continue;
        if (r == -1 || std::pair(D_[i][n_ + 1] / D_[i][s], B_[i]) <
                           std::pair(D_[r][n_ + 1] / D_[r][s], B_[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
      if (++pivots > cap) throw SolverError("simplex pivot cap exceeded");
    }
  }

  int m_, n_;
  std::vector<int> N_, B_;
  std::vector<std::vector<double>> D_;
};

}  // namespace

int LinearProgram::add_var(double objective_coeff, bool is_free) {
  objective_.push_back(objective_coeff);
  free_.push_back(is_free);
  return static_cast<int>(objective_.size()) - 1;
}

void LinearProgram::set_objective(int var, double coeff) { objective_[var] = coeff; }

void LinearProgram::add_row(const std::vector<std::pair<int, double>>& terms, Rel rel,
                            double rhs) {
  rows_.push_back({terms, rel, rhs});
}

LpSolution LinearProgram::maximize() const {
  // Map user variables to simplex columns; free variables get a split pair.
  const int nv = num_vars();
  std::vector<int> col(nv), neg_col(nv, -1);
  int n = 0;
  for (int v = 0; v < nv; ++v) {
    col[v] = n++;
    if (free_[v]) neg_col[v] = n++;
  }
  int m = 0;
  for (const Row& row : rows_) m += row.rel == Rel::kEq ? 2 : 1;

  std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
  std::vector<double> b(m, 0.0), c(n, 0.0);
  for (int v = 0; v < nv; ++v) {
    c[col[v]] = objective_[v];
    if (neg_col[v] >= 0) c[neg_col[v]] = -objective_[v];
  }
  int r = 0;
  for (const Row& row : rows_) {
    double sign = row.rel == Rel::kGe ? -1.0 : 1.0;
    for (auto [v, coeff] : row.terms) {
      A[r][col[v]] += sign * coeff;
      if (neg_col[v] >= 0) A[r][neg_col[v]] -= sign * coeff;
    }
    b[r] = sign * row.rhs;
    if (row.rel == Rel::kEq) {
      for (int j = 0; j < n; ++j) A[r + 1][j] = -A[r][j];
      b[r + 1] = -b[r];
      ++r;
    }
    ++r;
  }

  std::vector<double> raw;
  double value = Simplex(std::move(A), std::move(b), std::move(c)).solve(raw);
  LpSolution sol;
  if (value == -kInf) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  if (value == kInf) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }
  sol.value = value;
  sol.x.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    sol.x[v] = raw[col[v]];
    if (neg_col[v] >= 0) sol.x[v] -= raw[neg_col[v]];
  }
  return sol;
}

}  // namespace credal
