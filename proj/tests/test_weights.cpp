#include <doctest.h>

#include <cmath>

#include "rosesum/errors.hpp"
#include "rosesum/weights.hpp"

using namespace rosesum;

TEST_CASE("builtin weights") {
  CHECK(exp_decay(0.05)(2.0) == doctest::Approx(0.0025));
  CHECK(mcshane()(1e-12) == doctest::Approx(0.5));
  CHECK(power(4)(2.0) == doctest::Approx(1.0 / 16));
  CHECK_THROWS_AS(exp_decay(1.0), DomainError);
  CHECK_THROWS_AS(exp_decay(0.0), DomainError);
  CHECK_THROWS_AS(power(-1), DomainError);
}

TEST_CASE("closed-form second derivatives agree with finite differences") {
  for (const auto& f : {mcshane(), exp_decay(0.3), power(4)}) {
    for (double x = 0.1; x <= 10.0; x += 0.1) {
      const double h = 1e-4 * std::max(1.0, x);
      const double fd = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
      CHECK(f.second_derivative(x) > 0.0);
      CHECK(fd == doctest::Approx(f.second_derivative(x)).epsilon(1e-4).scale(1e-6));
    }
  }
}

TEST_CASE("weight parsing") {
  CHECK(parse_weight("exp:0.05").descriptor() == "exp:0.05");
  CHECK(parse_weight("mcshane").decay_envelope().has_value());
  CHECK(parse_weight("pow:4").poly_decay().has_value());
  CHECK_FALSE(parse_weight("pow:3").poly_decay().has_value());
  CHECK_THROWS_AS(parse_weight("exp:"), DomainError);
  CHECK_THROWS_AS(parse_weight("exp:1.5"), DomainError);
  CHECK_THROWS_AS(parse_weight("gauss"), DomainError);
}

TEST_CASE("validation and admissibility") {
  CHECK_NOTHROW(mcshane().validate());
  CHECK_NOTHROW(exp_decay(0.01).validate());
  WeightFunction bad("bad", [](double x) { return std::exp(-x); }, DecayEnvelope{0.1, 0.2, 0.0}, std::nullopt, true);
  CHECK_THROWS_AS(bad.validate(), DomainError);
  WeightFunction rising("rising", [](double x) { return x; }, std::nullopt, std::nullopt, false);
  CHECK_THROWS_AS(rising.validate(), DomainError);

  CHECK(check_admissible(mcshane()).admissible());
  CHECK(check_admissible(power(4)).admissible());
  CHECK_FALSE(check_admissible(power(3)).admissible());
  CHECK_FALSE(check_admissible(exp_decay(0.5)).admissible());
  WeightFunction concave("concave", [](double x) { return 1.0 / (1.0 + x * x); }, std::nullopt, PolyDecay{1, 0.5, 0},
                         false);
  CHECK_FALSE(check_admissible(concave).convex);
}
