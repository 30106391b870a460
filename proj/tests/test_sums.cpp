#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rosesum/census.hpp"
#include "rosesum/errors.hpp"
#include "rosesum/pairwise_sum.hpp"
#include "rosesum/sums.hpp"

using namespace rosesum;

TEST_CASE("pairwise summation") {
  PairwiseSum s;
  for (int i = 0; i < 1000000; ++i) s.add(0.1);
  CHECK(std::abs(s.total() - 100000.0) < 1e-8);
  CHECK(s.count() == 1000000);
  CHECK(PairwiseSum{}.total() == 0.0);
}

TEST_CASE("partial sums") {
  auto f = exp_decay(0.05);
  auto cls = enumerate_classes(barycenter(2), 1.0, ClassKind::all);
  auto ps = partial_sum(cls, barycenter(2), f, 1.0);
  CHECK(ps.terms == 12);
  CHECK(ps.value == doctest::Approx(4 * std::sqrt(0.05) + 8 * 0.05));
  auto empty = partial_sum({}, barycenter(2), f, 1.0);
  CHECK(empty.terms == 0);
  CHECK(empty.value == 0.0);

  // visible-point identity: P partial sum over a box
  MetricStructure L({0.3, 0.7});
  auto v = visible_partial_sum(L, mcshane(), 5);
  double direct = 0;
  for (long p = -5; p <= 5; ++p)
    for (long q = -5; q <= 5; ++q)
      if ((p || q) && std::gcd(p, q) == 1) direct += mcshane()(0.3 * std::labs(p) + 0.7 * std::labs(q));
  CHECK(v.value == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("census and enumerated partial sums agree") {
  for (auto lengths : {std::vector<double>{0.3, 0.7}, std::vector<double>{0.2, 0.3, 0.5}}) {
    MetricStructure L(lengths);
    const double R = lengths.size() == 2 ? 3.0 : 1.6;
    auto census = occurrence_census(L.rank(), static_cast<int>(R / L.min_length()) + 1);
    for (auto kind : {ClassKind::all, ClassKind::rootfree}) {
      auto c = kind == ClassKind::all ? census : occurrence_census(L.rank(), census.max_total(), kind);
      auto a = census_partial_sum(c, L, exp_decay(0.05), R);
      auto b = enumerated_partial_sum(L, kind, exp_decay(0.05), R);
      CHECK(a.terms == b.terms);
      CHECK(std::abs(a.value - b.value) <= 1e-12 * std::max(1.0, std::abs(a.value)));
    }
  }
}

TEST_CASE("C tail bound") {
  auto f = exp_decay(0.05);
  const auto L = barycenter(2);
  const double t = tail_bound_Cf(L, f, 4.0);
  CHECK(std::isfinite(t));
  // independent geometric closed form over cyclically reduced words of length n > 8
  double geo = 0;
  for (int n = 8; n < 400; ++n) geo += 4 * std::pow(3.0, n - 1) * std::pow(0.05, std::max(4.0, n * 0.5));
  CHECK(t <= geo * (1 + 1e-9));
  // soundness against the exact mass between R and 3R
  auto census = occurrence_census(2, 25);
  const double mass = census_partial_sum(census, L, f, 12.0).value - census_partial_sum(census, L, f, 4.0).value;
  CHECK(mass <= t);
  CHECK(tail_bound_Cf(L, f, 6.0) <= t);

  CHECK(std::isinf(tail_bound_Cf(MetricStructure({0.05, 0.95}), exp_decay(0.5), 3.0)));
  CHECK_THROWS_AS(tail_bound_Cf(L, power(4), 3.0), NoCertificate);
}

TEST_CASE("P tail bound at rank 2") {
  CHECK(tail_bound_Pf_k2(0.5, mcshane(), 60) < 1e-8);
  double direct = 0;
  for (long M = 61; M < 5000; ++M) direct += 8.0 * M / (std::exp(M / 2.0) + 1.0);
  CHECK(direct <= tail_bound_Pf_k2(0.5, mcshane(), 60));

  for (long N : {10L, 50L, 200L}) CHECK(tail_bound_Pf_k2(0.5, power(4), N) <= 64.0 / (N * N) * (1 + 1e-9));
  CHECK(tail_bound_Pf_k2(0.1, mcshane(), 40) > tail_bound_Pf_k2(0.3, mcshane(), 40));

  // soundness against the exact visible mass between the boxes
  MetricStructure L({0.2, 0.8});
  const double mass = visible_partial_sum(L, mcshane(), 150).value - visible_partial_sum(L, mcshane(), 30).value;
  CHECK(mass <= tail_bound_Pf_k2(L, mcshane(), 30));
}

TEST_CASE("classifier") {
  auto f = exp_decay(0.05);
  CHECK(classify_convergence(SeriesKind::C, barycenter(2), f).verdict == Convergence::converges);
  CHECK(classify_convergence(SeriesKind::C, MetricStructure({0.05, 0.95}), f).verdict == Convergence::diverges);
  CHECK(classify_convergence(SeriesKind::S, MetricStructure({0.05, 0.95}), f).verdict == Convergence::diverges);
  CHECK(classify_convergence(SeriesKind::C, barycenter(2), mcshane()).verdict == Convergence::diverges);
  CHECK(classify_convergence(SeriesKind::P, barycenter(2), mcshane()).verdict == Convergence::converges);
  CHECK(classify_convergence(SeriesKind::C, barycenter(2), power(4)).verdict == Convergence::unknown);
  CHECK(classify_convergence(SeriesKind::C, barycenter(2), exp_decay(1.0 / 9)).verdict == Convergence::unknown);
  auto p = classify_convergence(SeriesKind::P, boundary_family_prim(3, 0.05), exp_decay(0.005));
  CHECK(p.verdict == Convergence::diverges);
  CHECK(p.subrose_entropy > p.rate_lower);
}

TEST_CASE("estimates") {
  auto f = exp_decay(0.05);
  auto c = estimate(SeriesKind::C, barycenter(2), f, 1e-6);
  CHECK(c.status == SumStatus::converged);
  CHECK(c.tail_bound <= 1e-6);
  CHECK(c.value > 1.2944);

  auto s = estimate(SeriesKind::S, barycenter(2), f, 1e-6);
  CHECK(s.status == SumStatus::converged);
  CHECK(s.value < c.value);

  auto d = estimate(SeriesKind::C, MetricStructure({0.05, 0.95}), f, 1e-6);
  CHECK(d.status == SumStatus::divergence_certified);
  REQUIRE(d.certificate.has_value());
  CHECK(d.certificate->gap > kClassifierMargin);
  CHECK(d.certificate->entropy > std::log(20.0));

  auto tight = estimate(SeriesKind::C, barycenter(2), f, 1e-30, SumBudget{10});
  CHECK(tight.status == SumStatus::inconclusive);
}

TEST_CASE("P estimates over t and relabeling symmetry") {
  for (double t = 0.05; t < 0.96; t += 0.1) {
    auto a = estimate(SeriesKind::P, MetricStructure({t, 1 - t}), mcshane(), 1e-8);
    auto b = estimate(SeriesKind::P, MetricStructure({1 - t, t}), mcshane(), 1e-8);
    CHECK(a.status == SumStatus::converged);
    CHECK(a.tail_bound <= 1e-8);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound + b.tail_bound);
  }
}

TEST_CASE("estimate_at is monotone and sound") {
  const MetricStructure L({0.4, 0.6});
  auto f = exp_decay(0.02);
  double prev_v = 0, prev_t = INFINITY;
  SumEstimate first;
  for (double R : {2.0, 3.0, 4.0, 6.0, 8.0}) {
    auto e = estimate_at(SeriesKind::C, L, f, R);
    if (R == 2.0) first = e;
    CHECK(e.value >= prev_v);
    CHECK(e.tail_bound <= prev_t);
    CHECK(e.value <= first.value + first.tail_bound);
    prev_v = e.value;
    prev_t = e.tail_bound;
  }
}

TEST_CASE("g a_k partial sums") {
  const auto L = boundary_family_prim(3, 0.05);
  auto f = exp_decay(0.005);
  auto fam = primitive_family_ga_k(L, 2.0);
  auto direct = partial_sum(fam, L, f, 2.0);
  auto counted = ga_k_partial_sum(L, f, 2.0);
  CHECK(direct.terms == counted.terms);
  CHECK(counted.value == doctest::Approx(direct.value).epsilon(1e-12));
}

TEST_CASE("g_pq") {
  auto f = mcshane();
  for (double t : {0.1, 0.3, 0.45}) CHECK(gpq(t, 2, 5, f) == doctest::Approx(gpq(1 - t, 2, 5, f)));
  const double h = 1e-5;
  CHECK(std::abs((gpq(0.5 + h, 3, 1, f) - gpq(0.5 - h, 3, 1, f)) / (2 * h)) < 1e-9);
  for (double t : {0.2, 0.5, 0.7}) {
    CHECK(gpq_second(t, 1, 4, f) > 0);
    const double fd = (gpq(t + 1e-4, 1, 4, f) - 2 * gpq(t, 1, 4, f) + gpq(t - 1e-4, 1, 4, f)) / 1e-8;
    CHECK(fd == doctest::Approx(gpq_second(t, 1, 4, f)).epsilon(1e-4));
  }
  CHECK(gpq_second(0.3, 2, 2, f) == 0.0);
}
