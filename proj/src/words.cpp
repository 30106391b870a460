#include "rosesum/words.hpp"

#include <algorithm>
#include <numeric>

#include "rosesum/errors.hpp"

namespace rosesum {

namespace {

constexpr int kMaxRank = 26;

void check_rank(int rank) {
  if (rank < 1 || rank > kMaxRank)
    throw DomainError("rank must lie in 1..26, got " + std::to_string(rank));
}

void check_letters(std::span<const Letter> letters, int rank) {
  for (Letter l : letters)
    if (l.generator() > rank)
      throw DomainError("generator index " + std::to_string(l.generator()) + " exceeds rank " +
                        std::to_string(rank));
}

}  // namespace

Letter Letter::make(int generator, int sign) {
  if (generator < 1 || generator > kMaxRank)
    throw DomainError("generator index must lie in 1..26, got " + std::to_string(generator));
  if (sign != 1 && sign != -1) throw DomainError("letter sign must be +1 or -1");
  return from_code(static_cast<std::uint8_t>(2 * (generator - 1) + (sign < 0 ? 1 : 0)));
}

Letter Letter::from_char(char c) {
  if (c >= 'a' && c <= 'z') return make(c - 'a' + 1, 1);
  if (c >= 'A' && c <= 'Z') return make(c - 'A' + 1, -1);
  throw DomainError(std::string("not a letter: '") + c + "'");
}

char Letter::to_char() const noexcept {
  const char base = sign() > 0 ? 'a' : 'A';
  return static_cast<char>(base + generator() - 1);
}

Word::Word(int rank) : rank_(rank) { check_rank(rank); }

Word Word::parse(std::string_view text, int rank) {
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char c : text) raw.push_back(Letter::from_char(c));
  return free_reduce(raw, rank);
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l = l.inverse();
  return Word(rank_, std::move(out));
}

std::string Word::to_string() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(l.to_char());
  return s;
}

Word operator*(const Word& lhs, const Word& rhs) {
  if (lhs.rank_ != rhs.rank_) throw DomainError("rank mismatch in word product");
  std::vector<Letter> out = lhs.letters_;
  for (Letter l : rhs.letters_) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(lhs.rank_, std::move(out));
}

Word free_reduce(std::span<const Letter> raw, int rank) {
  check_rank(rank);
  check_letters(raw, rank);
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(rank, std::move(out));
}

CyclicReduction cyclic_reduce(const Word& w) {
  const auto s = w.letters();
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (hi - lo >= 2 && s[lo] == s[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return CyclicReduction{free_reduce(s.subspan(lo, hi - lo), w.rank()),
                         free_reduce(s.subspan(0, lo), w.rank())};
}

std::string CyclicWord::to_string() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(l.to_char());
  return s;
}

Word CyclicWord::as_word() const { return free_reduce(letters_, rank_); }

std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  thread_local std::vector<long> failure;
  failure.assign(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const Letter sj = s[j % n];
    long i = failure[j - k - 1];
    while (i != -1 && sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = failure[static_cast<std::size_t>(i)];
    }
    if (sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      // i == -1 here
      if (sj < s[k % n]) k = j;
      failure[j - k] = -1;
    } else {
      failure[j - k] = i + 1;
    }
  }
  return k % n;
}

bool is_cyclically_reduced(std::span<const Letter> s) {
  if (s.empty()) return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i + 1] == s[i].inverse()) return false;
  return s.size() == 1 || s.front() != s.back().inverse();
}

bool is_canonical_cyclic(std::span<const Letter> s) {
  if (!is_cyclically_reduced(s)) return false;
  // Two-pointer minimum-rotation scan; index 0 survives iff s is least.
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = s[(i + k) % n];
    const Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j) == 0;
}

CyclicWord canonical_from_cyclic_letters(std::span<const Letter> letters, int rank) {
  const std::size_t start = least_rotation(letters);
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) out.push_back(letters[(start + i) % letters.size()]);
  return CyclicWord(rank, std::move(out));
}

CyclicWord canonical_class(const Word& w) {
  if (w.empty()) throw DomainError("the trivial word has no conjugacy class in C_k");
  const CyclicReduction red = cyclic_reduce(w);
  return canonical_from_cyclic_letters(red.core.letters(), w.rank());
}

CyclicWord parse_class(std::string_view text, int rank) { return canonical_class(Word::parse(text, rank)); }

std::vector<int> abelianize(const Word& w) {
  std::vector<int> out(static_cast<std::size_t>(w.rank()), 0);
  for (Letter l : w.letters()) out[static_cast<std::size_t>(l.generator() - 1)] += l.sign();
  return out;
}

std::vector<int> abelianize(const CyclicWord& c) { return abelianize(c.as_word()); }

std::vector<int> occurrence_vector(std::span<const Letter> letters, int rank) {
  std::vector<int> out(static_cast<std::size_t>(rank), 0);
  for (Letter l : letters) ++out[static_cast<std::size_t>(l.generator() - 1)];
  return out;
}

std::vector<int> occurrence_vector(const CyclicWord& c) { return occurrence_vector(c.letters(), c.rank()); }

std::size_t cyclic_period(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  thread_local std::vector<std::size_t> pi;
  pi.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  const std::size_t p = n - pi[n - 1];
  return n % p == 0 ? p : n;
}

bool is_proper_power(const CyclicWord& c) { return cyclic_period(c.letters()) < c.length(); }

bool is_visible(long p, long q) {
  if (p == 0 && q == 0) throw DomainError("(0,0) is not a lattice direction");
  return std::gcd(p < 0 ? -p : p, q < 0 ? -q : q) == 1;
}

CyclicWord primitive_rep_from_visible(long p, long q) {
  if (!is_visible(p, q))
    throw DomainError("(" + std::to_string(p) + "," + std::to_string(q) + ") is not visible");
  const long a_count = p < 0 ? -p : p;
  const long b_count = q < 0 ? -q : q;
  const long n = a_count + b_count;
  const Letter a = Letter::make(1, p < 0 ? -1 : 1);
  const Letter b = Letter::make(2, q < 0 ? -1 : 1);
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(n));
  // lower Christoffel word of slope b_count / a_count
  for (long i = 1; i <= n; ++i)
    letters.push_back((i * b_count) / n > ((i - 1) * b_count) / n ? b : a);
  return canonical_from_cyclic_letters(letters, 2);
}

Count word_count_formula_check(int rank, int n) {
  if (n < 1) throw DomainError("word length must be at least 1");
  Count c = 2 * rank;
  for (int i = 1; i < n; ++i) c *= (2 * rank - 1);
  return c;
}

}  // namespace rosesum
