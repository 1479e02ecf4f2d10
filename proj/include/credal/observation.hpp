#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace credal {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-step observation alphabet sizes plus the forecast truncation depth H.
// A schedule listing fewer entries than the run length repeats its last entry.
class AlphabetSchedule {
 public:
  AlphabetSchedule(std::vector<int> sizes, int horizon);

  int size_at(int step) const {
    return step < static_cast<int>(sizes_.size()) ? sizes_[step] : sizes_.back();
  }
  int horizon() const { return horizon_; }
  const std::vector<int>& sizes() const { return sizes_; }

  bool operator==(const AlphabetSchedule& o) const = default;

 private:
  std::vector<int> sizes_;
  int horizon_;
};

// A finite observation history: symbols at positions 0..size()-1.
class History {
 public:
  History() = default;
  History(std::vector<int> symbols, const AlphabetSchedule& schedule);

  int size() const { return static_cast<int>(symbols_.size()); }
  int operator[](int i) const { return symbols_[i]; }
  const std::vector<int>& symbols() const { return symbols_; }
  int back() const { return symbols_.back(); }

  History extended(int symbol, const AlphabetSchedule& schedule) const;
  bool is_prefix_of(const History& other) const;

  bool operator==(const History& o) const = default;

 private:
  std::vector<int> symbols_;
};

// All depth-H continuations of a base history, in lexicographic order.
// The ordering is normative: measure vectors index against it.
class OutcomeWindow {
 public:
  OutcomeWindow(History base, int depth, const AlphabetSchedule& schedule);

  int start() const { return base_.size(); }
  int depth() const { return depth_; }
  const History& base() const { return base_; }
  const AlphabetSchedule& schedule() const { return *schedule_; }

  int size() const { return static_cast<int>(strides_[0] * size_at(0)); }
  int size_at(int offset) const { return schedule_->size_at(start() + offset); }

  // Symbol at `offset` of completion `index`.
  int symbol(int index, int offset) const {
    return (index / strides_[offset]) % size_at(offset);
  }
  // Completion index of the given suffix symbols.
  int index_of(std::span<const int> suffix) const;
  std::vector<int> suffix(int index) const;

  // Index of the length-d prefix block of completion `index` (mixed radix over
  // the first d offsets).
  int prefix_block(int index, int d) const {
    return d == 0 ? 0 : index / strides_[d - 1];
  }
  // Number of distinct length-d prefixes.
  int num_prefixes(int d) const {
    return d == 0 ? 1 : size() / strides_[d - 1];
  }
  // Number of completions sharing a length-d prefix.
  int block_size(int d) const { return d == 0 ? size() : strides_[d - 1]; }

  bool same_window(const OutcomeWindow& o) const {
    if (!(base_ == o.base_) || depth_ != o.depth_) return false;
    for (int j = 0; j < depth_; ++j)
      if (size_at(j) != o.size_at(j)) return false;
    return true;
  }

 private:
  History base_;
  int depth_;
  const AlphabetSchedule* schedule_;
  std::vector<int> strides_;  // strides_[j] = product of sizes at offsets > j
};

OutcomeWindow enumerate_window(const History& base, int depth, const AlphabetSchedule& schedule);

// Position-weighted ultrametric family: the distance between two completions
// is the largest weight among disagreeing offsets. The geometric default uses
// weight 2^{-offset}, i.e. 2^{n-m} for a disagreement at absolute position m
// seen from step n. Positive weights always satisfy the metric axioms; the
// exhaustive check below guards custom families at load time.
class MetricFamily {
 public:
  static MetricFamily geometric();
  static MetricFamily from_weights(std::vector<double> weights);

  double weight(int offset) const;
  bool nonincreasing() const { return nonincreasing_; }

  double distance(const OutcomeWindow& w, int i, int j) const;

 private:
  MetricFamily() = default;
  bool geometric_ = true;
  bool nonincreasing_ = true;
  std::vector<double> weights_;
};

double rho(const MetricFamily& metric, const OutcomeWindow& w, int x, int x_prime);

// Exhaustively checks symmetry, identity, positivity and the triangle
// inequality on a window with at most `max_size` completions.
void check_metric_axioms(const MetricFamily& metric, const AlphabetSchedule& schedule,
                         int max_size = 32);

}  // namespace credal
