#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rosesum/errors.hpp"
#include "rosesum/experiments.hpp"

using namespace rosesum;

TEST_CASE("entropy blow-up") {
  auto t2 = entropy_blowup_curve(2, {0.1, 0.3, 0.5});
  CHECK(t2.rows[2].entropy == doctest::Approx(2 * std::log(3.0)).epsilon(1e-10));
  CHECK(t2.rows[0].entropy > t2.rows[1].entropy);
  CHECK(t2.rows[1].entropy > t2.rows[2].entropy);
  CHECK(t2.strictly_decreasing);

  std::vector<double> grid;
  // past t = 1/3 the last petal shrinks and the entropy grows again
  for (int i = 1; i <= 16; ++i) grid.push_back(0.02 * i);
  auto t3 = entropy_blowup_curve(3, grid);
  CHECK(t3.strictly_decreasing);
  for (int k : {2, 3}) {
    auto t = entropy_blowup_curve(k, {0.01});
    CHECK(t.rows[0].entropy > 2 * t.barycenter_entropy);
  }
  CHECK_THROWS_AS(entropy_blowup_curve(2, {1.2}), DomainError);
}

TEST_CASE("theorem A contracts") {
  CHECK_THROWS_AS(theoremA_conj(2, 0.2), HypothesisViolation);
  CHECK_THROWS_AS(theoremA_prim(2, 0.005), DomainError);
  CHECK_THROWS_AS(theoremB_scan(exp_decay(0.05), 0.1), HypothesisViolation);
  CHECK_THROWS_AS(theoremC_scan(2, exp_decay(0.2)), HypothesisViolation);
  CHECK_THROWS_AS(theoremC_scan(2, power(4)), HypothesisViolation);
}

TEST_CASE("theorem A at rank 3 for conjugacy classes") {
  auto r = theoremA_conj(3, 0.005);
  CHECK(r.point_finite.estimate.status == SumStatus::converged);
  CHECK(r.point_divergent.estimate.status == SumStatus::divergence_certified);
  CHECK(r.separated);
}

TEST_CASE("theorem B with a power weight") {
  TheoremBOptions opt;
  opt.target_tail = 1e-3;
  auto r = theoremB_scan(power(4), 0.25, opt);
  CHECK(r.all_converged);
  CHECK(r.all_positive);
  CHECK(r.argmin == doctest::Approx(0.5));
}

TEST_CASE("tangent directions") {
  auto d = tangent_directions(4, 5, 0);
  CHECK(d.size() == 5);
  for (const auto& v : d) {
    CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0)) < 1e-14);
    CHECK(std::inner_product(v.begin(), v.end(), v.begin(), 0.0) == doctest::Approx(1.0));
  }
  CHECK(tangent_directions(4, 5, 0) == d);
  CHECK(tangent_directions(4, 5, 1) != d);
}
