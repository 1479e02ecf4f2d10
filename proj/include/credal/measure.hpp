#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "credal/observation.hpp"

namespace credal {

struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A probability vector over an outcome window's completions.
class FiniteMeasure {
 public:
  FiniteMeasure(OutcomeWindow window, std::vector<double> weights);

  static FiniteMeasure uniform(const OutcomeWindow& window);
  static FiniteMeasure dirac(const OutcomeWindow& window, int completion);

  const OutcomeWindow& window() const { return window_; }
  const std::vector<double>& weights() const { return weights_; }
  double operator[](int i) const { return weights_[i]; }
  int size() const { return static_cast<int>(weights_.size()); }

  // Probability of the cylinder of all completions whose first d symbols
  // form the given prefix block.
  double prefix_mass(int block, int d) const;

  // Marginal distribution of the symbol at `offset`.
  std::vector<double> marginal(int offset) const;

  double expectation(std::span<const double> f) const;

  // Bayes restriction to the completions extending `longer_base`, which must
  // extend the window base. The result's window keeps the original end.
  FiniteMeasure conditioned(const History& longer_base) const;

  void renormalize();
  double mass_error() const;  // |sum - 1|

 private:
  OutcomeWindow window_;
  std::vector<double> weights_;
};

double expectation(const FiniteMeasure& mu, std::span<const double> f);

// A family of one-step Markov kernels: row(y) is the distribution of the
// symbol at position y.size() given history y. Rows must be stochastic.
class Kernel {
 public:
  using RowFn = std::function<std::vector<double>(const History&)>;

  Kernel(RowFn fn, std::string description);

  // K(y) = point mass on the previous symbol. Positions 0 fall back to
  // uniform (no previous symbol exists).
  static Kernel copy_previous(const AlphabetSchedule& schedule);
  // K(y) = p_copy on the previous symbol, remainder spread uniformly.
  static Kernel noisy_copy(const AlphabetSchedule& schedule, double p_copy);
  static Kernel fixed_row(std::vector<double> row);
  static Kernel uniform(const AlphabetSchedule& schedule);

  std::vector<double> row(const History& y) const;
  const std::string& description() const { return desc_; }

 private:
  RowFn fn_;
  std::string desc_;
};

// Semidirect product: extends mu by one position using the kernel row at each
// completion's full history. Output window has depth+1.
FiniteMeasure semidirect(const FiniteMeasure& mu, const Kernel& kernel);

}  // namespace credal
