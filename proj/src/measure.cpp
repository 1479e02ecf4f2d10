#include "credal/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace credal {

namespace {
constexpr double kMassTol = 1e-9;
}

FiniteMeasure::FiniteMeasure(OutcomeWindow window, std::vector<double> weights)
    : window_(std::move(window)), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != window_.size())
    throw DomainError("weight vector length does not match window size");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < -kMassTol) throw DomainError("negative weight in measure");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-6) throw DomainError("measure weights do not sum to 1");
  for (double& w : weights_) w = std::max(w, 0.0);
  renormalize();
}

FiniteMeasure FiniteMeasure::uniform(const OutcomeWindow& window) {
  return FiniteMeasure(window, std::vector<double>(window.size(), 1.0 / window.size()));
}

FiniteMeasure FiniteMeasure::dirac(const OutcomeWindow& window, int completion) {
  std::vector<double> w(window.size(), 0.0);
  w.at(completion) = 1.0;
  return FiniteMeasure(window, std::move(w));
}

double FiniteMeasure::prefix_mass(int block, int d) const {
  const int bs = window_.block_size(d);
  double sum = 0.0;
  for (int i = block * bs; i < (block + 1) * bs; ++i) sum += weights_[i];
  return sum;
}

std::vector<double> FiniteMeasure::marginal(int offset) const {
  std::vector<double> m(window_.size_at(offset), 0.0);
  for (int i = 0; i < size(); ++i) m[window_.symbol(i, offset)] += weights_[i];
  return m;
}

double FiniteMeasure::expectation(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != size())
    throw DomainError("payoff vector length does not match measure window");
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) sum += weights_[i] * f[i];
  return sum;
}

FiniteMeasure FiniteMeasure::conditioned(const History& longer_base) const {
  if (!window_.base().is_prefix_of(longer_base))
    throw DomainError("conditioning history does not extend the window base");
  const int d = longer_base.size() - window_.start();
  if (d == 0) return *this;
  if (d > window_.depth()) throw DomainError("conditioning history exceeds the window");
  if (d == window_.depth()) throw DomainError("conditioning consumes the entire window");
  std::vector<int> prefix(longer_base.symbols().end() - d, longer_base.symbols().end());
  int block = 0;
  for (int j = 0; j < d; ++j) {
    const int s = window_.size_at(j);
    if (prefix[j] < 0 || prefix[j] >= s) throw DomainError("conditioning symbol out of range");
    block = block * s + prefix[j];
  }
  const int bs = window_.block_size(d);
  double mass = prefix_mass(block, d);
  if (mass <= 0.0)
    throw ConditioningError("conditioning on a zero-probability cylinder");
  std::vector<double> w(weights_.begin() + static_cast<std::ptrdiff_t>(block) * bs,
                        weights_.begin() + static_cast<std::ptrdiff_t>(block + 1) * bs);
  for (double& x : w) x /= mass;
  OutcomeWindow sub(longer_base, window_.depth() - d, window_.schedule());
  return FiniteMeasure(std::move(sub), std::move(w));
}

void FiniteMeasure::renormalize() {
  double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (sum <= 0.0) throw DomainError("cannot renormalize a zero measure");
  for (double& w : weights_) w /= sum;
}

double FiniteMeasure::mass_error() const {
  return std::fabs(std::accumulate(weights_.begin(), weights_.end(), 0.0) - 1.0);
}

double expectation(const FiniteMeasure& mu, std::span<const double> f) {
  return mu.expectation(f);
}

Kernel::Kernel(RowFn fn, std::string description) : fn_(std::move(fn)), desc_(std::move(description)) {}

Kernel Kernel::copy_previous(const AlphabetSchedule& schedule) {
  return Kernel(
      [&schedule](const History& y) {
        const int s = schedule.size_at(y.size());
        std::vector<double> row(s, 0.0);
        if (y.size() == 0) {
          std::fill(row.begin(), row.end(), 1.0 / s);
        } else {
          if (y.back() >= s) throw DomainError("copy kernel needs matching alphabet sizes");
          row[y.back()] = 1.0;
        }
        return row;
      },
      "copy");
}

Kernel Kernel::noisy_copy(const AlphabetSchedule& schedule, double p_copy) {
  if (p_copy < 0.0 || p_copy > 1.0) throw DomainError("p_copy must be in [0,1]");
  return Kernel(
      [&schedule, p_copy](const History& y) {
        const int s = schedule.size_at(y.size());
        std::vector<double> row(s, (1.0 - p_copy) / std::max(1, s - 1));
        if (y.size() == 0) {
          std::fill(row.begin(), row.end(), 1.0 / s);
        } else {
          if (y.back() >= s) throw DomainError("copy kernel needs matching alphabet sizes");
          if (s == 1) {
            row[0] = 1.0;
          } else {
            row[y.back()] = p_copy;
          }
        }
        return row;
      },
      "noisy-copy");
}

Kernel Kernel::fixed_row(std::vector<double> row) {
  return Kernel([row](const History&) { return row; }, "fixed");
}

Kernel Kernel::uniform(const AlphabetSchedule& schedule) {
  return Kernel(
      [&schedule](const History& y) {
        const int s = schedule.size_at(y.size());
        return std::vector<double>(s, 1.0 / s);
      },
      "uniform");
}

std::vector<double> Kernel::row(const History& y) const {
  std::vector<double> r = fn_(y);
  double sum = 0.0;
  for (double p : r) {
    if (p < -kMassTol) throw DomainError("kernel row has a negative entry");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kMassTol) throw DomainError("kernel row does not sum to 1");
  return r;
}

FiniteMeasure semidirect(const FiniteMeasure& mu, const Kernel& kernel) {
  const OutcomeWindow& w = mu.window();
  const AlphabetSchedule& schedule = w.schedule();
  OutcomeWindow out(w.base(), w.depth() + 1, schedule);
  const int s_new = out.size_at(w.depth());
  std::vector<double> weights(static_cast<std::size_t>(w.size()) * s_new);
  for (int i = 0; i < w.size(); ++i) {
    History h = w.base();
    for (int j = 0; j < w.depth(); ++j) h = h.extended(w.symbol(i, j), schedule);
    std::vector<double> row = kernel.row(h);
    if (static_cast<int>(row.size()) != s_new)
      throw DomainError("kernel row size does not match alphabet at the new position");
    for (int o = 0; o < s_new; ++o)
      weights[static_cast<std::size_t>(i) * s_new + o] = mu[i] * row[o];
  }
  return FiniteMeasure(std::move(out), std::move(weights));
}

}  // namespace credal
