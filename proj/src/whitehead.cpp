#include "rosesum/whitehead.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "rosesum/errors.hpp"

namespace rosesum {

Automorphism::Automorphism(std::vector<Word> images) : images_(std::move(images)) {
  if (images_.empty()) throw DomainError("an automorphism needs at least one generator image");
  for (const Word& w : images_)
    if (w.rank() != rank()) throw DomainError("generator images must live in the same free group");
}

Word Automorphism::apply(const Word& w) const {
  if (w.rank() != rank()) throw DomainError("rank mismatch between automorphism and word");
  std::vector<Letter> raw;
  raw.reserve(w.length() * 2);
  for (Letter l : w.letters()) {
    const auto img = image(l.generator()).letters();
    if (l.sign() > 0) {
      raw.insert(raw.end(), img.begin(), img.end());
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) raw.push_back(it->inverse());
    }
  }
  return free_reduce(raw, rank());
}

CyclicWord Automorphism::apply(const CyclicWord& c) const { return canonical_class(apply(c.as_word())); }

std::vector<Automorphism> whitehead_automorphisms(int rank) {
  if (rank < 1 || rank > 26) throw DomainError("rank must lie in 1..26");
  std::vector<Automorphism> out;
  const auto k = static_cast<std::size_t>(rank);

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
      std::vector<Word> images;
      for (std::size_t i = 0; i < k; ++i) {
        const Letter l = Letter::make(perm[i], (mask >> i) & 1U ? -1 : 1);
        images.push_back(free_reduce(std::span<const Letter>(&l, 1), rank));
      }
      out.emplace_back(std::move(images));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  const std::size_t letters = 2 * k;
  for (std::size_t xc = 0; xc < letters; ++xc) {
    const Letter x = Letter::from_code(static_cast<std::uint8_t>(xc));
    // the other 2k-2 letters, indexed by bit position
    std::vector<Letter> others;
    for (std::size_t c = 0; c < letters; ++c)
      if (c / 2 != xc / 2) others.push_back(Letter::from_code(static_cast<std::uint8_t>(c)));
    for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << others.size()); ++subset) {
      auto in_a = [&](Letter l) {
        const auto pos = std::find(others.begin(), others.end(), l) - others.begin();
        return (subset >> pos) & 1U;
      };
      std::vector<Word> images;
      for (int g = 1; g <= rank; ++g) {
        std::vector<Letter> raw;
        const Letter y = Letter::make(g, 1);
        if (g != x.generator()) {
          if (in_a(y.inverse())) raw.push_back(x.inverse());
          raw.push_back(y);
          if (in_a(y)) raw.push_back(x);
        } else {
          raw.push_back(y);
        }
        images.push_back(free_reduce(raw, rank));
      }
      out.emplace_back(std::move(images));
    }
  }
  return out;
}

std::set<CyclicWord> whitehead_primitives_upto(int rank, int max_length, std::size_t visit_cap) {
  if (max_length < 1) throw DomainError("max_length must be at least 1");
  const auto moves = whitehead_automorphisms(rank);
  const Letter a1 = Letter::make(1, 1);
  std::set<CyclicWord> seen{canonical_from_cyclic_letters(std::span<const Letter>(&a1, 1), rank)};
  std::deque<CyclicWord> frontier(seen.begin(), seen.end());
  std::size_t visits = 0;
  while (!frontier.empty()) {
    const CyclicWord c = frontier.front();
    frontier.pop_front();
    for (const Automorphism& phi : moves) {
      if (++visits > visit_cap) throw BudgetExceeded("Whitehead closure exceeded its visit cap");
      CyclicWord d = phi.apply(c);
      if (d.length() > static_cast<std::size_t>(max_length)) continue;
      if (seen.insert(d).second) frontier.push_back(std::move(d));
    }
  }
  return seen;
}

bool is_primitive_by_whitehead(const CyclicWord& c, const std::vector<Automorphism>& moves) {
  CyclicWord cur = c;
  while (cur.length() > 1) {
    bool reduced = false;
    for (const Automorphism& phi : moves) {
      CyclicWord next = phi.apply(cur);
      if (next.length() < cur.length()) {
        cur = std::move(next);
        reduced = true;
        break;
      }
    }
    // a class of minimal length > 1 in its orbit is not primitive
    if (!reduced) return false;
  }
  return true;
}

}  // namespace rosesum
