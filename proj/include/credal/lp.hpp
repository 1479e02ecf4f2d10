#pragma once

#include <stdexcept>
#include <vector>

namespace credal {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double value = 0.0;
  std::vector<double> x;
};

// Small dense LP in general form. Variables are nonnegative unless declared
// free (free variables are split internally). Rows are a·x {<=,>=,=} rhs.
// Solved by a dense simplex with deterministic pivoting; intended for the
// desk-scale problems this project produces (hundreds of rows/columns).
class LinearProgram {
 public:
  enum class Rel { kLe, kGe, kEq };

  int add_var(double objective_coeff, bool is_free = false);
  void set_objective(int var, double coeff);
  void add_row(const std::vector<std::pair<int, double>>& terms, Rel rel, double rhs);

  // Maximizes the objective. For minimization negate the objective and value.
  LpSolution maximize() const;

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

 private:
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Rel rel;
    double rhs;
  };
  std::vector<double> objective_;
  std::vector<bool> free_;
  std::vector<Row> rows_;
};

}  // namespace credal
