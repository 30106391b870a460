#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "rosesum/errors.hpp"
#include "rosesum/words.hpp"

using namespace rosesum;

namespace {

// Oracle: cancel adjacent inverse pairs until nothing changes.
std::vector<Letter> naive_reduce(std::vector<Letter> s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i].inverse() == s[i + 1]) {
        s.erase(s.begin() + static_cast<long>(i), s.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return s;
}

// Oracle: least rotation by trying all of them.
std::vector<Letter> brute_min_rotation(const std::vector<Letter>& s) {
  std::vector<Letter> best = s;
  for (std::size_t r = 1; r < s.size(); ++r) {
    std::vector<Letter> rot(s.begin() + static_cast<long>(r), s.end());
    rot.insert(rot.end(), s.begin(), s.begin() + static_cast<long>(r));
    best = std::min(best, rot);
  }
  return best;
}

std::vector<Letter> random_letters(std::mt19937_64& rng, int rank, int n) {
  std::uniform_int_distribution<int> d(0, 2 * rank - 1);
  std::vector<Letter> out;
  for (int i = 0; i < n; ++i) out.push_back(Letter::from_code(static_cast<std::uint8_t>(d(rng))));
  return out;
}

std::vector<Letter> to_vec(std::span<const Letter> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("letters and parsing") {
  CHECK(Letter::from_char('a').generator() == 1);
  CHECK(Letter::from_char('B').sign() == -1);
  CHECK(Letter::from_char('b').inverse() == Letter::from_char('B'));
  CHECK(Letter::make(3, -1).to_char() == 'C');
  CHECK_THROWS_AS(Word::parse("ac", 2), DomainError);
  CHECK_THROWS_AS(Letter::make(0, 1), DomainError);
}

TEST_CASE("free reduction examples") {
  CHECK(Word::parse("aA", 2).empty());
  CHECK(Word::parse("abBa", 2).to_string() == "aa");
  CHECK(Word::parse("abaB", 2).to_string() == "abaB");
}

TEST_CASE("free reduction agrees with naive cancellation and is idempotent") {
  std::mt19937_64 rng(1);
  for (int k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 400; ++trial) {
      auto raw = random_letters(rng, k, static_cast<int>(rng() % 13));
      Word w = free_reduce(raw, k);
      CHECK(to_vec(w.letters()) == naive_reduce(raw));
      CHECK(free_reduce(w.letters(), k) == w);
    }
  }
}

TEST_CASE("cyclic reduction") {
  auto r = cyclic_reduce(Word::parse("abA", 2));
  CHECK(r.core.to_string() == "b");
  CHECK(r.conjugator.to_string() == "a");
  r = cyclic_reduce(Word::parse("abbA", 2));
  CHECK(r.core.to_string() == "bb");
  CHECK(r.conjugator.to_string() == "a");
  r = cyclic_reduce(Word::parse("ab", 2));
  CHECK(r.core.to_string() == "ab");
  CHECK(r.conjugator.empty());

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = free_reduce(random_letters(rng, 3, 10), 3);
    auto c = cyclic_reduce(w);
    CHECK(c.conjugator * c.core * c.conjugator.inverse() == w);
    CHECK(c.core.empty() == w.empty());
    if (!w.empty()) CHECK(is_cyclically_reduced(c.core.letters()));
  }
}

TEST_CASE("canonical classes") {
  CHECK(canonical_class(Word::parse("ba", 2)).to_string() == "ab");
  CHECK(canonical_class(Word::parse("bA", 2)) == canonical_class(Word::parse("Ab", 2)));
  CHECK(canonical_class(Word::parse("abA", 2)).to_string() == "b");
  CHECK_THROWS_AS(canonical_class(Word::parse("", 2)), DomainError);
  CHECK_THROWS_AS(parse_class("aA", 2), DomainError);
}

TEST_CASE("Booth least rotation matches brute force") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    auto s = random_letters(rng, 2, 1 + static_cast<int>(rng() % 12));
    const std::size_t i = least_rotation(s);
    std::vector<Letter> rot(s.begin() + static_cast<long>(i), s.end());
    rot.insert(rot.end(), s.begin(), s.begin() + static_cast<long>(i));
    CHECK(rot == brute_min_rotation(s));
  }
}

TEST_CASE("canonical form is a conjugacy invariant") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    Word w = free_reduce(random_letters(rng, 3, 1 + static_cast<int>(rng() % 10)), 3);
    if (w.empty()) continue;
    Word u = free_reduce(random_letters(rng, 3, static_cast<int>(rng() % 9)), 3);
    CHECK(canonical_class(u * w * u.inverse()) == canonical_class(w));
  }
}

TEST_CASE("abelianization and occurrence vectors") {
  CHECK(abelianize(Word::parse("ab", 2)) == std::vector<int>{1, 1});
  CHECK(abelianize(Word::parse("abA", 2)) == std::vector<int>{0, 1});
  CHECK(abelianize(Word::parse("aaBBB", 2)) == std::vector<int>{2, -3});
  CHECK(occurrence_vector(parse_class("aB", 2)) == std::vector<int>{1, 1});
  CHECK(occurrence_vector(parse_class("aab", 2)) == std::vector<int>{2, 1});
  CHECK(occurrence_vector(parse_class("AA", 2)) == std::vector<int>{2, 0});

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Word u = free_reduce(random_letters(rng, 3, 8), 3);
    Word v = free_reduce(random_letters(rng, 3, 8), 3);
    auto a = abelianize(u), b = abelianize(v), ab = abelianize(u * v);
    for (int i = 0; i < 3; ++i) CHECK(ab[static_cast<std::size_t>(i)] == a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("proper powers") {
  CHECK(is_proper_power(parse_class("abab", 2)));
  CHECK_FALSE(is_proper_power(parse_class("ab", 2)));
  CHECK_FALSE(is_proper_power(parse_class("aabb", 2)));
  CHECK(is_proper_power(parse_class("AA", 2)));
  CHECK(cyclic_period(parse_class("abcabc", 3).letters()) == 3);
}

TEST_CASE("visible points") {
  CHECK(is_visible(2, 3));
  CHECK_FALSE(is_visible(2, 4));
  CHECK(is_visible(1, 0));
  CHECK(is_visible(-1, 0));
  CHECK_FALSE(is_visible(2, 0));
  CHECK_THROWS_AS(is_visible(0, 0), DomainError);
}

TEST_CASE("Christoffel representatives of visible points") {
  CHECK(primitive_rep_from_visible(1, 0).to_string() == "a");
  CHECK(primitive_rep_from_visible(1, 1).to_string() == "ab");
  CHECK_THROWS_AS(primitive_rep_from_visible(2, 4), DomainError);
  std::set<CyclicWord> seen;
  for (long p = -12; p <= 12; ++p) {
    for (long q = -12; q <= 12; ++q) {
      if ((p == 0 && q == 0) || std::gcd(p, q) != 1) continue;
      const CyclicWord c = primitive_rep_from_visible(p, q);
      CHECK(seen.insert(c).second);
      if (std::max(std::labs(p), std::labs(q)) > 8) continue;
      CHECK(abelianize(c) == std::vector<int>{static_cast<int>(p), static_cast<int>(q)});
      CHECK(occurrence_vector(c) == std::vector<int>{static_cast<int>(std::labs(p)), static_cast<int>(std::labs(q))});
      for (Letter l : c.letters()) CHECK(l.sign() == (l.generator() == 1 ? (p > 0 ? 1 : -1) : (q > 0 ? 1 : -1)));
    }
  }
}

TEST_CASE("reduced word count formula") {
  CHECK(word_count_formula_check(2, 1) == 4);
  CHECK(word_count_formula_check(2, 2) == 12);
  CHECK(word_count_formula_check(3, 3) == 150);
}
