#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "rosesum/words.hpp"

namespace rosesum {

/// An endomorphism of F_k given by the images of the generators.
class Automorphism {
 public:
  explicit Automorphism(std::vector<Word> images);

  int rank() const noexcept { return static_cast<int>(images_.size()); }
  const Word& image(int generator) const { return images_.at(static_cast<std::size_t>(generator - 1)); }

  Word apply(const Word& w) const;
  /// Image of a class, cyclically reduced and canonicalized. The image of a
  /// class under an automorphism is never trivial.
  CyclicWord apply(const CyclicWord& c) const;

 private:
  std::vector<Word> images_;
};

/// All Whitehead automorphisms of F_k: the signed generator permutations and
/// the nontrivial (A, x) moves y -> x^-[y^-1 in A] y x^[y in A].
std::vector<Automorphism> whitehead_automorphisms(int rank);

inline constexpr std::size_t kWhiteheadVisitCap = 10'000'000;

/// Canonical forms of every primitive class of cyclic length <= max_length:
/// the closure of [a_1] under Whitehead automorphisms, pruned at max_length.
/// Peak reduction makes the pruned closure complete. Throws BudgetExceeded
/// past `visit_cap` visited classes.
std::set<CyclicWord> whitehead_primitives_upto(int rank, int max_length, std::size_t visit_cap = kWhiteheadVisitCap);

/// Whitehead's length-reduction test: a class is primitive iff greedy
/// strictly shortening moves bring it down to length 1.
bool is_primitive_by_whitehead(const CyclicWord& c, const std::vector<Automorphism>& moves);

}  // namespace rosesum
