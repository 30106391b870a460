#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "rosesum/census.hpp"
#include "rosesum/census_store.hpp"
#include "rosesum/errors.hpp"
#include "rosesum/whitehead.hpp"

using namespace rosesum;

namespace {

// Oracle: every cyclically reduced letter string of length n, canonicalized
// by trying all rotations, collected in a set. Keys: occurrence vectors.
std::map<std::vector<int>, long> brute_class_counts(int k, int n, bool rootfree) {
  std::set<std::vector<std::uint8_t>> necklaces;
  const int a = 2 * k;
  std::vector<std::uint8_t> s(static_cast<std::size_t>(n));
  long total = 1;
  for (int i = 0; i < n; ++i) total *= a;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i, c /= a) s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(c % a);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if ((s[static_cast<std::size_t>(i)] ^ 1U) == s[static_cast<std::size_t>((i + 1) % n)]) ok = false;
    if (!ok) continue;
    auto best = s;
    for (int r = 1; r < n; ++r) {
      std::vector<std::uint8_t> rot(s.begin() + r, s.end());
      rot.insert(rot.end(), s.begin(), s.begin() + r);
      best = std::min(best, rot);
    }
    if (rootfree) {
      bool power = false;
      for (int p = 1; p < n && !power; ++p) {
        if (n % p) continue;
        bool periodic = true;
        for (int i = 0; i < n && periodic; ++i)
          periodic = best[static_cast<std::size_t>(i)] == best[static_cast<std::size_t>((i + p) % n)];
        power = periodic;
      }
      if (power) continue;
    }
    necklaces.insert(best);
  }
  std::map<std::vector<int>, long> out;
  for (const auto& w : necklaces) {
    std::vector<int> m(static_cast<std::size_t>(k));
    for (auto l : w) ++m[l / 2];
    ++out[m];
  }
  return out;
}

}  // namespace

TEST_CASE("occurrence census small values") {
  auto t = occurrence_census(2, 6);
  CHECK(t.q(std::vector<int>{1, 0}) == 2);
  CHECK(t.q(std::vector<int>{1, 1}) == 4);
  CHECK(t.q(std::vector<int>{2, 0}) == 2);
  CHECK(t.classes_of_length(1) == 4);
  CHECK(t.classes_of_length(2) == 8);
  CHECK_THROWS(t.q(std::vector<int>{4, 3}));
}

TEST_CASE("occurrence census matches brute-force necklaces") {
  for (int k : {2, 3}) {
    const int nmax = k == 2 ? 7 : 5;
    auto all = occurrence_census(k, nmax);
    auto rf = occurrence_census(k, nmax, ClassKind::rootfree);
    for (int n = 1; n <= nmax; ++n) {
      for (bool rootfree : {false, true}) {
        const auto& table = rootfree ? rf : all;
        auto brute = brute_class_counts(k, n, rootfree);
        const auto& idx = table.index();
        for (std::size_t i = idx.layer_begin(n); i < idx.layer_end(n); ++i) {
          auto m = idx.vector(i);
          std::vector<int> key(m.begin(), m.end());
          CHECK(table.classes()[i] == (brute.count(key) ? brute[key] : 0));
        }
      }
      CHECK(all.reduced_of_length(n) == word_count_formula_check(k, n));
    }
  }
}

TEST_CASE("transfer census matches the DFS census") {
  for (auto [k, n] : {std::pair{2, 11}, std::pair{3, 7}, std::pair{4, 5}}) {
    for (auto kind : {ClassKind::all, ClassKind::rootfree}) {
      auto a = occurrence_census(k, n, kind);
      auto b = occurrence_census_by_enumeration(k, n, kind);
      CHECK(std::equal(a.classes().begin(), a.classes().end(), b.classes().begin(), b.classes().end()));
      CHECK(std::equal(a.cyclic_words().begin(), a.cyclic_words().end(), b.cyclic_words().begin(),
                       b.cyclic_words().end()));
    }
  }
}

TEST_CASE("census symmetric under generator permutation") {
  auto t = occurrence_census(3, 7);
  const auto& idx = t.index();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto m = idx.vector(i);
    std::vector<int> r = {m[2], m[0], m[1]};
    CHECK(t.q(r) == t.classes()[i]);
  }
}

TEST_CASE("class enumeration") {
  auto all = enumerate_classes(barycenter(2), 1.0, ClassKind::all);
  CHECK(all.size() == 12);
  CHECK(std::is_sorted(all.begin(), all.end()));
  std::size_t rf2 = 0;
  for_each_class_of_length(2, 2, ClassKind::rootfree, [&](const CyclicWord&) { ++rf2; });
  CHECK(rf2 == 4);
  CHECK(enumerate_classes(barycenter(2), 0.4, ClassKind::all).empty());

  // re-canonicalization is the identity on emitted items, and counts match the census by metric length
  MetricStructure L({0.3, 0.7});
  auto census = occurrence_census(2, 14);
  for (double R : {0.5, 1.3, 2.2, 3.0, 4.1}) {
    auto cls = enumerate_classes(L, R, ClassKind::all);
    std::unordered_set<std::string> seen;
    for (const auto& c : cls) {
      CHECK(canonical_class(c.as_word()) == c);
      CHECK(seen.insert(c.to_string()).second);
    }
    CHECK(Count(cls.size()) == census.classes_within(L, R));
  }
}

TEST_CASE("visible points") {
  CHECK(visible_points_upto(1).points.size() == 8);
  auto v2 = visible_points_upto(2);
  CHECK(v2.points.size() == 16);
  CHECK(std::find(v2.points.begin(), v2.points.end(), std::pair{2L, 0L}) == v2.points.end());
  auto v = visible_points_upto(9);
  for (auto [p, q] : v.points) {
    CHECK(is_visible(p, q));
    CHECK(std::binary_search(v.points.begin(), v.points.end(), std::pair{q, p}));
    CHECK(std::binary_search(v.points.begin(), v.points.end(), std::pair{-p, q}));
  }
  CHECK(primitive_classes_F2(barycenter(2), 1.0).size() == 8);
  CHECK(primitive_classes_F2(barycenter(2), 1.5).size() == 16);
  CHECK(primitive_classes_F2(MetricStructure({0.3, 0.7}), 0.29).empty());
  CHECK_THROWS_AS(primitive_classes_F2(barycenter(3), 1.0), DomainError);
}

TEST_CASE("Whitehead oracle") {
  auto p1 = whitehead_primitives_upto(2, 1);
  CHECK(p1.size() == 4);
  auto p2 = whitehead_primitives_upto(2, 2);
  CHECK(p2.size() == 8);
  CHECK(p2.count(parse_class("aB", 2)));
  CHECK_FALSE(p2.count(parse_class("aa", 2)));
  auto p5 = whitehead_primitives_upto(2, 5);
  CHECK(p5.count(primitive_rep_from_visible(2, 3)));
  CHECK_THROWS_AS(whitehead_primitives_upto(3, 9, 1000), BudgetExceeded);

  auto moves = whitehead_automorphisms(3);
  const auto p6 = whitehead_primitives_upto(3, 6);
  for (const char* w : {"abcabC", "abcb", "aabc", "abAc", "abCB"})
    CHECK(is_primitive_by_whitehead(parse_class(w, 3), moves) == (p6.count(parse_class(w, 3)) > 0));
  CHECK(is_primitive_by_whitehead(parse_class("aab", 3), moves));
  CHECK_FALSE(is_primitive_by_whitehead(parse_class("abAB", 3), moves));
}

TEST_CASE("g a_k family") {
  MetricStructure L = boundary_family_prim(3, 0.2);
  auto fam = primitive_family_ga_k(L, 1.5);
  std::set<CyclicWord> distinct(fam.begin(), fam.end());
  CHECK(distinct.size() == fam.size());
  CHECK(distinct.count(parse_class("c", 3)));
  CHECK(Count(fam.size()) == subrose_ball_count(L, 1.0));
  CHECK_THROWS_AS(primitive_family_ga_k(barycenter(2), 1.0), DomainError);
}

TEST_CASE("census cache round trip and version stamp") {
  const auto dir = std::filesystem::temp_directory_path() / "rosesum_unit_cache";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto t = occurrence_census(2, 8, ClassKind::rootfree);
  const auto file = dir / census_file_name(2, ClassKind::rootfree, 8);
  save_census(t, file);
  auto u = load_census(file);
  CHECK(u.kind() == ClassKind::rootfree);
  CHECK(std::equal(t.classes().begin(), t.classes().end(), u.classes().begin(), u.classes().end()));

  CensusStore store(dir, 1);
  auto s = store.get(2, ClassKind::rootfree, 6);
  CHECK(s->max_total() >= 6);

  std::string text;
  {
    std::ifstream in(file);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto pos = text.find("\"version\"");
  REQUIRE(pos != std::string::npos);
  text.replace(text.find_first_of("0123456789", pos), 1, "7");
  {
    std::ofstream out(file);
    out << text;
  }
  CHECK_THROWS_AS(load_census(file), CacheError);
  CensusStore fresh(dir, 1);
  CHECK_THROWS_AS(fresh.get(2, ClassKind::rootfree, 6), CacheError);
  std::filesystem::remove_all(dir);
}
