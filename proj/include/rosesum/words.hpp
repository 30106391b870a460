#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rosesum/count.hpp"

namespace rosesum {

/// A letter a_i^{+1} or a_i^{-1} of the free basis of F_k.
///
/// Stored as the code 2(i-1) + (sign < 0), so the natural order of codes is
/// a_1 < a_1^-1 < a_2 < a_2^-1 < ... and inversion flips the low bit.
class Letter {
 public:
  constexpr Letter() = default;

  static Letter make(int generator, int sign);
  static constexpr Letter from_code(std::uint8_t code) noexcept {
    Letter l;
    l.code_ = code;
    return l;
  }
  /// `a`..`z` for positive letters, `A`..`Z` for inverses.
  static Letter from_char(char c);

  constexpr int generator() const noexcept { return code_ / 2 + 1; }
  constexpr int sign() const noexcept { return (code_ & 1U) ? -1 : 1; }
  constexpr std::uint8_t code() const noexcept { return code_; }
  constexpr Letter inverse() const noexcept { return from_code(static_cast<std::uint8_t>(code_ ^ 1U)); }
  char to_char() const noexcept;

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  std::uint8_t code_ = 0;
};

/// A freely reduced word in F_k. The only way to obtain one is through
/// free_reduce (or helpers built on it), so the invariant always holds.
class Word {
 public:
  explicit Word(int rank);

  static Word parse(std::string_view text, int rank);

  int rank() const noexcept { return rank_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  Word inverse() const;
  std::string to_string() const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;

 private:
  Word(int rank, std::vector<Letter> letters) : rank_(rank), letters_(std::move(letters)) {}
  friend Word free_reduce(std::span<const Letter> raw, int rank);

  int rank_;
  std::vector<Letter> letters_;
};

/// Canonical representative of a nontrivial conjugacy class: cyclically
/// reduced and the least rotation under the letter order. Ordered
/// length-first, then lexicographically.
class CyclicWord {
 public:
  int rank() const noexcept { return rank_; }
  std::size_t length() const noexcept { return letters_.size(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  std::string to_string() const;
  Word as_word() const;

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b);

 private:
  CyclicWord(int rank, std::vector<Letter> letters) : rank_(rank), letters_(std::move(letters)) {}
  friend CyclicWord canonical_class(const Word& w);
  friend CyclicWord canonical_from_cyclic_letters(std::span<const Letter> letters, int rank);

  int rank_;
  std::vector<Letter> letters_;
};

struct CyclicReduction {
  Word core;        ///< cyclically reduced, in its original rotation
  Word conjugator;  ///< w == conjugator * core * conjugator^-1
};

Word free_reduce(std::span<const Letter> raw, int rank);
CyclicReduction cyclic_reduce(const Word& w);

/// Throws DomainError on the trivial word.
CyclicWord canonical_class(const Word& w);

/// Parses `text`, reduces it and canonicalizes. Throws DomainError for trivial input.
CyclicWord parse_class(std::string_view text, int rank);

/// abelianization: coordinate i counts a_i minus a_i^-1.
std::vector<int> abelianize(const Word& w);
std::vector<int> abelianize(const CyclicWord& c);

/// m_i = occurrences of a_i^{+1} plus a_i^{-1}.
std::vector<int> occurrence_vector(const CyclicWord& c);
std::vector<int> occurrence_vector(std::span<const Letter> letters, int rank);

bool is_proper_power(const CyclicWord& c);

/// gcd(|p|,|q|) == 1; (0,0) is a DomainError.
bool is_visible(long p, long q);

/// Canonical class of the primitive element of F(a,b) with abelianization
/// (p,q), realized as a signed lower Christoffel word.
CyclicWord primitive_rep_from_visible(long p, long q);

/// Number of freely reduced words of length n in F_k: 2k(2k-1)^(n-1).
Count word_count_formula_check(int rank, int n);

// Low-level helpers shared with the enumeration engines.

/// Booth's algorithm: start index of the lexicographically least rotation.
std::size_t least_rotation(std::span<const Letter> s);
bool is_cyclically_reduced(std::span<const Letter> s);
/// True iff s is freely reduced, cyclically reduced and already its least rotation.
bool is_canonical_cyclic(std::span<const Letter> s);
/// Canonicalizes a cyclically reduced letter sequence (no reduction performed).
CyclicWord canonical_from_cyclic_letters(std::span<const Letter> letters, int rank);
/// Smallest p dividing n with s[i] == s[(i+p) mod n]; equals n for primitive necklaces.
std::size_t cyclic_period(std::span<const Letter> s);

}  // namespace rosesum
