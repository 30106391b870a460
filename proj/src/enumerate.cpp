#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "rosesum/census.hpp"
#include "rosesum/errors.hpp"

namespace rosesum {

namespace {

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Slack for the prefix pruning test; exact membership is decided at the leaf.
constexpr double kPruneSlack = 1e-9;

/// Depth-first walk over reduced words of one fixed length with optional
/// metric pruning and an optional lower bound on every letter.
class FixedLengthWalk {
 public:
  FixedLengthWalk(int rank, std::size_t length, const MetricStructure* metric, double radius)
      : letters_(static_cast<std::uint8_t>(2 * rank)), length_(length), metric_(metric), radius_(radius) {
    word_.resize(length);
  }

  /// `at_leaf(word)` is called for every reduced word of the fixed length
  /// whose first letter is `first` and whose letters are all >= `floor`.
  template <typename Leaf>
  void run(Letter first, Letter floor, Leaf&& at_leaf) {
    word_[0] = first;
    descend(1, prefix_length(first), floor, at_leaf);
  }

 private:
  double prefix_length(Letter l) const { return metric_ ? metric_->length(l.generator()) : 0.0; }

  template <typename Leaf>
  void descend(std::size_t depth, double used, Letter floor, Leaf& at_leaf) {
    if (metric_) {
      const double remaining = static_cast<double>(length_ - depth) * metric_->min_length();
      if (used + remaining > radius_ + kPruneSlack) return;
    }
    if (depth == length_) {
      at_leaf(std::span<const Letter>(word_.data(), length_));
      return;
    }
    const Letter back = word_[depth - 1].inverse();
    for (std::uint8_t c = floor.code(); c < letters_; ++c) {
      const Letter next = Letter::from_code(c);
      if (next == back) continue;
      word_[depth] = next;
      descend(depth + 1, used + prefix_length(next), floor, at_leaf);
    }
  }

  std::uint8_t letters_;
  std::size_t length_;
  const MetricStructure* metric_;
  double radius_;
  std::vector<Letter> word_;
};

void check_kind(ClassKind kind) {
  if (kind == ClassKind::primitive)
    throw DomainError("the necklace enumerator streams kinds all|rootfree; primitives come from the oracles");
}

/// Canonical necklaces start with their least letter, so every letter is >= the first.
template <typename Leaf>
void walk_necklaces(int rank, std::size_t n, const MetricStructure* metric, double radius, Leaf&& leaf) {
  FixedLengthWalk walk(rank, n, metric, radius);
  for (std::uint8_t c = 0; c < 2 * rank; ++c) walk.run(Letter::from_code(c), Letter::from_code(c), leaf);
}

}  // namespace

void for_each_class(const MetricStructure& metric, double radius, ClassKind kind, const ClassVisitor& visit) {
  check_kind(kind);
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  const int rank = metric.rank();
  const auto n_max = static_cast<std::size_t>(std::floor(radius / metric.min_length())) + 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    walk_necklaces(rank, n, &metric, radius, [&](std::span<const Letter> w) {
      if (!is_canonical_cyclic(w)) return;
      if (kind == ClassKind::rootfree && cyclic_period(w) < w.size()) return;
      if (class_length(metric, occurrence_vector(w, rank)) > radius) return;
      visit(canonical_from_cyclic_letters(w, rank));
    });
  }
}

std::vector<CyclicWord> enumerate_classes(const MetricStructure& metric, double radius, ClassKind kind) {
  std::vector<CyclicWord> out;
  for_each_class(metric, radius, kind, [&](const CyclicWord& c) { out.push_back(c); });
  return out;
}

void for_each_class_of_length(int rank, int n, ClassKind kind, const ClassVisitor& visit) {
  check_kind(kind);
  if (n < 1) throw DomainError("class length must be at least 1");
  if (rank < 1 || rank > 26) throw DomainError("rank must lie in 1..26");
  walk_necklaces(rank, static_cast<std::size_t>(n), nullptr, 0.0, [&](std::span<const Letter> w) {
    if (!is_canonical_cyclic(w)) return;
    if (kind == ClassKind::rootfree && cyclic_period(w) < w.size()) return;
    visit(canonical_from_cyclic_letters(w, rank));
  });
}

void for_each_reduced_word(const MetricStructure& metric, double radius,
                           const std::function<void(std::span<const Letter>)>& visit) {
  if (radius < 0.0) return;
  visit({});
  const int rank = metric.rank();
  const auto n_max = static_cast<std::size_t>(std::floor(radius / metric.min_length())) + 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    FixedLengthWalk walk(rank, n, &metric, radius);
    for (std::uint8_t c = 0; c < 2 * rank; ++c)
      walk.run(Letter::from_code(c), Letter::from_code(0), [&](std::span<const Letter> w) {
        if (class_length(metric, occurrence_vector(w, rank)) <= radius) visit(w);
      });
  }
}

namespace {

/// Unbounded DFS to depth `max_length` from one first letter, reporting every
/// node (a reduced word) to `node(word, occurrence_index)`.
template <typename Node>
void walk_all_prefixes(const OccurrenceIndex* index, int rank, int max_length, Letter first, Node&& node) {
  std::vector<Letter> word(static_cast<std::size_t>(max_length));
  std::vector<std::size_t> idx(static_cast<std::size_t>(max_length), 0);
  const auto letters = static_cast<std::uint8_t>(2 * rank);
  word[0] = first;
  if (index) {
    std::vector<int> unit(static_cast<std::size_t>(rank), 0);
    unit[static_cast<std::size_t>(first.generator() - 1)] = 1;
    idx[0] = *index->find(unit);
  }
  // explicit stack of next-letter candidates per depth
  std::vector<std::uint8_t> cursor(static_cast<std::size_t>(max_length) + 1, 0);
  std::size_t depth = 1;
  node(std::span<const Letter>(word.data(), 1), idx[0]);
  cursor[1] = 0;
  while (depth > 0) {
    if (depth == static_cast<std::size_t>(max_length) || cursor[depth] >= letters) {
      --depth;
      continue;
    }
    const Letter next = Letter::from_code(cursor[depth]++);
    if (next == word[depth - 1].inverse()) continue;
    word[depth] = next;
    if (index) idx[depth] = index->successor(idx[depth - 1], next.generator());
    node(std::span<const Letter>(word.data(), depth + 1), idx[depth]);
    ++depth;
    cursor[depth] = 0;
  }
}

}  // namespace

WordLengthCounts enumerate_word_counts(int rank, int max_length, unsigned threads) {
  if (max_length < 1) throw DomainError("max_length must be at least 1");
  if (rank < 1 || rank > 26) throw DomainError("rank must lie in 1..26");
  const auto size = static_cast<std::size_t>(max_length) + 1;
  const int letters = 2 * rank;
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(letters));
  struct Tally {
    std::vector<std::uint64_t> reduced, cyclic, classes, rootfree;
  };
  std::vector<Tally> tallies(workers);
  for (auto& t : tallies) {
    t.reduced.assign(size, 0);
    t.cyclic.assign(size, 0);
    t.classes.assign(size, 0);
    t.rootfree.assign(size, 0);
  }
  auto work = [&](unsigned w) {
    Tally& t = tallies[w];
    for (int c = static_cast<int>(w); c < letters; c += static_cast<int>(workers))
      walk_all_prefixes(nullptr, rank, max_length, Letter::from_code(static_cast<std::uint8_t>(c)),
                        [&](std::span<const Letter> s, std::size_t) {
                          const std::size_t n = s.size();
                          ++t.reduced[n];
                          if (!is_cyclically_reduced(s)) return;
                          ++t.cyclic[n];
                          if (!is_canonical_cyclic(s)) return;
                          ++t.classes[n];
                          if (cyclic_period(s) == n) ++t.rootfree[n];
                        });
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  WordLengthCounts out;
  out.reduced.assign(size, Count(0));
  out.cyclic.assign(size, Count(0));
  out.classes.assign(size, Count(0));
  out.rootfree.assign(size, Count(0));
  for (const Tally& t : tallies)
    for (std::size_t n = 0; n < size; ++n) {
      out.reduced[n] += t.reduced[n];
      out.cyclic[n] += t.cyclic[n];
      out.classes[n] += t.classes[n];
      out.rootfree[n] += t.rootfree[n];
    }
  return out;
}

CensusTable occurrence_census_by_enumeration(int rank, int max_total, ClassKind kind, unsigned threads) {
  check_kind(kind);
  auto index = std::make_shared<const OccurrenceIndex>(rank, max_total);
  const std::size_t size = index->size();
  const int letters = 2 * rank;
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(letters));
  struct Tally {
    std::vector<std::uint64_t> reduced, cyclic, classes;
  };
  std::vector<Tally> tallies(workers);
  for (auto& t : tallies) {
    t.reduced.assign(size, 0);
    t.cyclic.assign(size, 0);
    t.classes.assign(size, 0);
  }
  auto work = [&](unsigned w) {
    Tally& t = tallies[w];
    for (int c = static_cast<int>(w); c < letters; c += static_cast<int>(workers))
      walk_all_prefixes(index.get(), rank, max_total, Letter::from_code(static_cast<std::uint8_t>(c)),
                        [&](std::span<const Letter> s, std::size_t i) {
                          ++t.reduced[i];
                          if (!is_cyclically_reduced(s)) return;
                          ++t.cyclic[i];
                          if (!is_canonical_cyclic(s)) return;
                          if (kind == ClassKind::rootfree && cyclic_period(s) < s.size()) return;
                          ++t.classes[i];
                        });
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::vector<Count> reduced(size), cyclic(size), classes(size);
  for (const Tally& t : tallies)
    for (std::size_t i = 0; i < size; ++i) {
      reduced[i] += t.reduced[i];
      cyclic[i] += t.cyclic[i];
      classes[i] += t.classes[i];
    }
  return CensusTable(std::move(index), kind, std::move(classes), std::move(reduced), std::move(cyclic));
}

VisiblePointSet visible_points_upto(long bound) {
  if (bound < 1) throw DomainError("visible point bound must be at least 1");
  VisiblePointSet out;
  out.bound = bound;
  for (long p = -bound; p <= bound; ++p)
    for (long q = -bound; q <= bound; ++q)
      if ((p != 0 || q != 0) && is_visible(p, q)) out.points.emplace_back(p, q);
  return out;
}

std::vector<PrimitiveTerm> primitive_classes_F2(const MetricStructure& metric, double radius) {
  if (metric.rank() != 2) throw DomainError("primitive_classes_F2 needs a rank-2 metric");
  std::vector<PrimitiveTerm> out;
  if (radius < metric.min_length()) return out;
  const auto p_max = static_cast<long>(std::floor(radius / metric.length(1))) + 1;
  const auto q_max = static_cast<long>(std::floor(radius / metric.length(2))) + 1;
  for (long p = -p_max; p <= p_max; ++p)
    for (long q = -q_max; q <= q_max; ++q) {
      if (p == 0 && q == 0) continue;
      if (!is_visible(p, q)) continue;
      const int m[2] = {static_cast<int>(std::labs(p)), static_cast<int>(std::labs(q))};
      const double len = class_length(metric, m);
      if (len <= radius) out.push_back({p, q, len});
    }
  return out;
}

namespace {

MetricStructure subrose(const MetricStructure& metric) {
  const auto x = metric.lengths();
  return MetricStructure(std::vector<double>(x.begin(), x.end() - 1));
}

}  // namespace

std::vector<CyclicWord> primitive_family_ga_k(const MetricStructure& metric, double radius) {
  const int k = metric.rank();
  if (k < 3) throw DomainError("the g a_k family needs rank k >= 3");
  std::vector<CyclicWord> out;
  const double last = metric.length(k);
  if (radius < last) return out;
  const MetricStructure sub = subrose(metric);
  const Letter a_k = Letter::make(k, 1);
  std::vector<Letter> buf;
  for_each_reduced_word(sub, radius - last + kPruneSlack, [&](std::span<const Letter> g) {
    buf.assign(g.begin(), g.end());
    buf.push_back(a_k);
    if (class_length(metric, occurrence_vector(buf, k)) > radius) return;
    out.push_back(canonical_from_cyclic_letters(buf, k));
  });
  return out;
}

Count subrose_ball_count(const MetricStructure& metric, double radius) {
  if (metric.rank() < 3) throw DomainError("the sub-rose needs rank k >= 3");
  if (radius < 0.0) return 0;
  const MetricStructure sub = subrose(metric);
  const int n = static_cast<int>(std::floor(radius / sub.min_length())) + 1;
  const CensusTable census = occurrence_census(sub.rank(), n, ClassKind::all, 1);
  return census.reduced_within(sub, radius) + 1;
}

}  // namespace rosesum
