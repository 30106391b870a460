#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rosesum {

/// sigma1^x <= f(x) <= sigma2^x for x >= threshold.
struct DecayEnvelope {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double threshold = 0.0;
};

/// f(x) <= C x^(-3-epsilon) for x >= threshold, so x^(3+epsilon) f(x) -> 0
/// for any smaller exponent.
struct PolyDecay {
  double C = 0.0;
  double epsilon = 0.0;
  double threshold = 0.0;
};

class WeightFunction {
 public:
  using Map = std::function<double(double)>;

  WeightFunction(std::string descriptor, Map f, std::optional<DecayEnvelope> envelope,
                 std::optional<PolyDecay> poly, bool convex, Map second_derivative = {});

  double operator()(double x) const { return f_(x); }
  double evaluate(double x) const { return f_(x); }

  const std::string& descriptor() const noexcept { return descriptor_; }
  const std::optional<DecayEnvelope>& decay_envelope() const noexcept { return envelope_; }
  const std::optional<PolyDecay>& poly_decay() const noexcept { return poly_; }
  bool convex() const noexcept { return convex_; }
  bool has_second_derivative() const noexcept { return static_cast<bool>(f2_); }
  /// Throws DomainError when the weight carries no closed form.
  double second_derivative(double x) const;

  /// Positivity and monotonicity on the grid 2^-6..2^6 and the envelope at
  /// 64 samples past its threshold. Throws DomainError on failure.
  void validate() const;

 private:
  std::string descriptor_;
  Map f_;
  std::optional<DecayEnvelope> envelope_;
  std::optional<PolyDecay> poly_;
  bool convex_;
  Map f2_;
};

/// f(x) = sigma^x, sigma in (0,1).
WeightFunction exp_decay(double sigma);
/// f(x) = 1/(e^x + 1).
WeightFunction mcshane();
/// f(x) = x^-p, p > 0. Carries a polynomial witness only for p > 3.
WeightFunction power(double p);

/// `exp:<sigma>`, `mcshane`, `pow:<p>`.
WeightFunction parse_weight(std::string_view text);

/// The geometric sample grid 2^-6, 2^-5, ..., 2^6.
std::vector<double> admissibility_grid();

struct AdmissibilityReport {
  bool positive = true;
  bool monotone = true;
  bool convex = true;
  bool decay = true;
  std::string failure;

  bool admissible() const noexcept { return positive && monotone && convex && decay; }
};

/// Sampled admissibility: f positive, non-increasing, f'' > 0 (closed form,
/// else central differences) on the grid, and a polynomial witness whose
/// bound holds and with x^(3+eps/2) f(x) decreasing over the last grid points.
AdmissibilityReport check_admissible(const WeightFunction& f);

}  // namespace rosesum
