#include "credal/observation.hpp"

#include <algorithm>
#include <cmath>

namespace credal {

AlphabetSchedule::AlphabetSchedule(std::vector<int> sizes, int horizon)
    : sizes_(std::move(sizes)), horizon_(horizon) {
  if (sizes_.empty()) throw DomainError("alphabet schedule must list at least one size");
  for (int s : sizes_)
    if (s < 1) throw DomainError("alphabet sizes must be >= 1");
  if (horizon_ < 1) throw DomainError("horizon must be >= 1");
}

History::History(std::vector<int> symbols, const AlphabetSchedule& schedule)
    : symbols_(std::move(symbols)) {
  for (int i = 0; i < static_cast<int>(symbols_.size()); ++i) {
    if (symbols_[i] < 0 || symbols_[i] >= schedule.size_at(i))
      throw DomainError("history symbol out of range at position " + std::to_string(i));
  }
}

History History::extended(int symbol, const AlphabetSchedule& schedule) const {
  if (symbol < 0 || symbol >= schedule.size_at(size()))
    throw DomainError("symbol out of range at position " + std::to_string(size()));
  History h;
  h.symbols_ = symbols_;
  h.symbols_.push_back(symbol);
  return h;
}

bool History::is_prefix_of(const History& other) const {
  if (size() > other.size()) return false;
  return std::equal(symbols_.begin(), symbols_.end(), other.symbols_.begin());
}

OutcomeWindow::OutcomeWindow(History base, int depth, const AlphabetSchedule& schedule)
    : base_(std::move(base)), depth_(depth), schedule_(&schedule) {
  if (depth_ < 1) throw DomainError("window depth must be >= 1");
  strides_.assign(depth_, 1);
  long long total = 1;
  for (int j = depth_ - 1; j >= 0; --j) {
    strides_[j] = static_cast<int>(total);
    total *= size_at(j);
    if (total > (1 << 20)) throw DomainError("outcome window too large");
  }
}

int OutcomeWindow::index_of(std::span<const int> suffix) const {
  if (static_cast<int>(suffix.size()) != depth_)
    throw DomainError("suffix length does not match window depth");
  int idx = 0;
  for (int j = 0; j < depth_; ++j) {
    if (suffix[j] < 0 || suffix[j] >= size_at(j))
      throw DomainError("suffix symbol out of range at offset " + std::to_string(j));
    idx += suffix[j] * strides_[j];
  }
  return idx;
}

std::vector<int> OutcomeWindow::suffix(int index) const {
  std::vector<int> s(depth_);
  for (int j = 0; j < depth_; ++j) s[j] = symbol(index, j);
  return s;
}

OutcomeWindow enumerate_window(const History& base, int depth, const AlphabetSchedule& schedule) {
  return OutcomeWindow(base, depth, schedule);
}

MetricFamily MetricFamily::geometric() { return MetricFamily(); }

MetricFamily MetricFamily::from_weights(std::vector<double> weights) {
  MetricFamily m;
  m.geometric_ = false;
  if (weights.empty()) throw DomainError("metric weight list must be nonempty");
  for (double w : weights)
    if (!(w > 0.0)) throw DomainError("metric weights must be positive");
  m.nonincreasing_ = std::is_sorted(weights.rbegin(), weights.rend());
  m.weights_ = std::move(weights);
  return m;
}

double MetricFamily::weight(int offset) const {
  if (geometric_) return std::ldexp(1.0, -offset);
  if (offset < static_cast<int>(weights_.size())) return weights_[offset];
  return weights_.back();
}

double MetricFamily::distance(const OutcomeWindow& w, int i, int j) const {
  double d = 0.0;
  for (int off = 0; off < w.depth(); ++off) {
    if (w.symbol(i, off) != w.symbol(j, off)) {
      d = std::max(d, weight(off));
      if (nonincreasing_) break;  // later offsets cannot raise the max
    }
  }
  return d;
}

double rho(const MetricFamily& metric, const OutcomeWindow& w, int x, int x_prime) {
  if (x < 0 || x >= w.size() || x_prime < 0 || x_prime >= w.size())
    throw DomainError("completion index outside window");
  return metric.distance(w, x, x_prime);
}

void check_metric_axioms(const MetricFamily& metric, const AlphabetSchedule& schedule,
                         int max_size) {
  int depth = 1;
  long long size = schedule.size_at(0);
  while (depth < schedule.horizon() && size * schedule.size_at(depth) <= max_size) {
    size *= schedule.size_at(depth);
    ++depth;
  }
  OutcomeWindow w(History(), depth, schedule);
  const int k = w.size();
  std::vector<double> d(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) d[static_cast<std::size_t>(i) * k + j] = metric.distance(w, i, j);
  for (int i = 0; i < k; ++i) {
    if (d[static_cast<std::size_t>(i) * k + i] != 0.0)
      throw DomainError("metric violates identity axiom");
    for (int j = 0; j < k; ++j) {
      double dij = d[static_cast<std::size_t>(i) * k + j];
      if (i != j && !(dij > 0.0)) throw DomainError("metric not positive on distinct completions");
      if (dij != d[static_cast<std::size_t>(j) * k + i]) throw DomainError("metric not symmetric");
      for (int l = 0; l < k; ++l) {
        if (dij > d[static_cast<std::size_t>(i) * k + l] + d[static_cast<std::size_t>(l) * k + j] + 1e-12)
          throw DomainError("metric violates triangle inequality");
      }
    }
  }
}

}  // namespace credal
