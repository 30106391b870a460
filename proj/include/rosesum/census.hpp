#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rosesum/count.hpp"
#include "rosesum/metric.hpp"
#include "rosesum/words.hpp"

namespace rosesum {

/// Which family of conjugacy classes a census or a series runs over.
enum class ClassKind { all, rootfree, primitive };

std::string_view to_string(ClassKind kind);
ClassKind parse_class_kind(std::string_view text);

/// Dense numbering of the occurrence vectors m in N^k with 1 <= |m| <= max_total.
/// Graded by |m|, lexicographic inside a grade, so the vectors of a smaller
/// index form a prefix of a larger one.
class OccurrenceIndex {
 public:
  OccurrenceIndex(int rank, int max_total);

  int rank() const noexcept { return rank_; }
  int max_total() const noexcept { return max_total_; }
  std::size_t size() const noexcept { return totals_.size(); }

  std::span<const int> vector(std::size_t idx) const {
    return {coords_.data() + idx * static_cast<std::size_t>(rank_), static_cast<std::size_t>(rank_)};
  }
  int total(std::size_t idx) const { return totals_[idx]; }
  std::size_t layer_begin(int n) const { return layer_offsets_[static_cast<std::size_t>(n - 1)]; }
  std::size_t layer_end(int n) const { return layer_offsets_[static_cast<std::size_t>(n)]; }

  std::optional<std::size_t> find(std::span<const int> m) const;
  /// Index of m + e_generator; requires total(idx) < max_total.
  std::size_t successor(std::size_t idx, int generator) const {
    return successors_[idx * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(generator - 1)];
  }

 private:
  static std::uint64_t pack(std::span<const int> m);

  int rank_;
  int max_total_;
  std::vector<int> coords_;
  std::vector<int> totals_;
  std::vector<std::size_t> layer_offsets_;
  std::vector<std::size_t> successors_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

/// Exact counts by occurrence vector, metric-independent. Word counts
/// (reduced and cyclically reduced) are present for the `all` and
/// `rootfree` kinds and absent for `primitive`.
class CensusTable {
 public:
  CensusTable(std::shared_ptr<const OccurrenceIndex> index, ClassKind kind, std::vector<Count> classes,
              std::vector<Count> reduced = {}, std::vector<Count> cyclic = {});

  int rank() const noexcept { return index_->rank(); }
  int max_total() const noexcept { return index_->max_total(); }
  ClassKind kind() const noexcept { return kind_; }
  const OccurrenceIndex& index() const noexcept { return *index_; }
  std::shared_ptr<const OccurrenceIndex> shared_index() const noexcept { return index_; }

  std::span<const Count> classes() const noexcept { return classes_; }
  std::span<const double> classes_as_double() const noexcept { return classes_double_; }
  bool has_word_counts() const noexcept { return !reduced_.empty(); }
  std::span<const Count> reduced_words() const noexcept { return reduced_; }
  std::span<const Count> cyclic_words() const noexcept { return cyclic_; }

  /// q_m; zero for vectors of the right rank beyond nothing, throws for |m| > max_total.
  Count q(std::span<const int> m) const;

  Count classes_of_length(int n) const;
  Count reduced_of_length(int n) const;
  Count cyclic_of_length(int n) const;

  /// Sums over m with class_length(metric, m) <= radius. Word sums require has_word_counts().
  Count classes_within(const MetricStructure& metric, double radius) const;
  Count reduced_within(const MetricStructure& metric, double radius) const;
  Count cyclic_within(const MetricStructure& metric, double radius) const;

  /// Largest metric radius R such that every word of length <= R is covered.
  double covered_radius(const MetricStructure& metric) const;

 private:
  Count sum_within(std::span<const Count> counts, const MetricStructure& metric, double radius) const;
  Count sum_layer(std::span<const Count> counts, int n) const;

  std::shared_ptr<const OccurrenceIndex> index_;
  ClassKind kind_;
  std::vector<Count> classes_;
  std::vector<double> classes_double_;
  std::vector<Count> reduced_;
  std::vector<Count> cyclic_;
};

/// Exact census by transfer counting: cyclically reduced words per occurrence
/// vector from a non-backtracking walk recursion split by first letter, then
/// root-free and all classes by Moebius inversion over divisors of gcd(m).
/// `threads` == 0 means hardware concurrency. Kinds: all | rootfree.
CensusTable occurrence_census(int rank, int max_total, ClassKind kind = ClassKind::all, unsigned threads = 0);

/// Same table by brute-force DFS over reduced words with "emit only if
/// canonical" necklace filtering. Exponential; meant for small sizes and
/// as an independent check of occurrence_census.
CensusTable occurrence_census_by_enumeration(int rank, int max_total, ClassKind kind = ClassKind::all,
                                             unsigned threads = 0);

/// Primitive classes of F_2 counted through visible points: the class of
/// (p,q) has occurrence vector (|p|,|q|).
CensusTable primitive_census_F2(int max_total);

/// Census of an explicit set of classes (e.g. the Whitehead oracle output).
CensusTable census_from_classes(int rank, int max_total, ClassKind kind, const std::set<CyclicWord>& classes);

/// Per-length counts from the DFS engine, index n = word length (entry 0 unused).
struct WordLengthCounts {
  std::vector<Count> reduced;
  std::vector<Count> cyclic;
  std::vector<Count> classes;
  std::vector<Count> rootfree;
};
WordLengthCounts enumerate_word_counts(int rank, int max_length, unsigned threads = 0);

using ClassVisitor = std::function<void(const CyclicWord&)>;

/// Streams every class with ℓ_L <= radius exactly once as its canonical word,
/// in length-lexicographic order. Kinds: all | rootfree.
void for_each_class(const MetricStructure& metric, double radius, ClassKind kind, const ClassVisitor& visit);
std::vector<CyclicWord> enumerate_classes(const MetricStructure& metric, double radius, ClassKind kind);

/// Every class of word length exactly n, lexicographic.
void for_each_class_of_length(int rank, int n, ClassKind kind, const ClassVisitor& visit);

/// Visits every reduced word g in F_k with L(g) <= radius, identity included,
/// in length-lexicographic order.
void for_each_reduced_word(const MetricStructure& metric, double radius,
                           const std::function<void(std::span<const Letter>)>& visit);

struct VisiblePointSet {
  long bound = 0;
  std::vector<std::pair<long, long>> points;  ///< sorted
};

VisiblePointSet visible_points_upto(long bound);

struct PrimitiveTerm {
  long p = 0;
  long q = 0;
  double length = 0.0;
};

/// Visible (p,q) with t|p| + (1-t)|q| <= radius where metric = (t, 1-t).
std::vector<PrimitiveTerm> primitive_classes_F2(const MetricStructure& metric, double radius);

/// Primitive classes [g a_k], g in F_{k-1}, with ℓ_L <= radius, each distinct.
std::vector<CyclicWord> primitive_family_ga_k(const MetricStructure& metric, double radius);

/// b_R for the sub-rose on the first k-1 petals: #{g in F_{k-1} : L(g) <= R}.
Count subrose_ball_count(const MetricStructure& metric, double radius);

}  // namespace rosesum
