#pragma once

#include <cstdint>
#include <vector>

namespace rosesum {

/// Streaming pairwise (tree) summation: partial sums of 2^j consecutive terms
/// are merged like a binary counter, so the rounding error grows with
/// log(n) instead of n. Deterministic for a fixed input order.
class PairwiseSum {
 public:
  void add(double x) {
    double carry = x;
    std::uint64_t level = 0;
    while (!stack_.empty() && stack_.back().level == level) {
      carry = stack_.back().value + carry;
      stack_.pop_back();
      ++level;
    }
    stack_.push_back({carry, level});
    ++count_;
  }

  double total() const {
    double acc = 0.0;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) acc = it->value + acc;
    return acc;
  }

  std::uint64_t count() const noexcept { return count_; }

 private:
  struct Node {
    double value;
    std::uint64_t level;
  };
  std::vector<Node> stack_;
  std::uint64_t count_ = 0;
};

}  // namespace rosesum
