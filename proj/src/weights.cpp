#include "rosesum/weights.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rosesum/errors.hpp"

namespace rosesum {

namespace {

constexpr double kEnvelopeSlack = 1e-12;
constexpr int kEnvelopeSamples = 64;

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

WeightFunction::WeightFunction(std::string descriptor, Map f, std::optional<DecayEnvelope> envelope,
                               std::optional<PolyDecay> poly, bool convex, Map second_derivative)
    : descriptor_(std::move(descriptor)),
      f_(std::move(f)),
      envelope_(envelope),
      poly_(poly),
      convex_(convex),
      f2_(std::move(second_derivative)) {
  if (!f_) throw DomainError("a weight needs an evaluation map");
  if (envelope_) {
    const auto& e = *envelope_;
    if (!(e.sigma1 > 0.0) || !(e.sigma2 < 1.0) || e.sigma1 > e.sigma2 || e.threshold < 0.0)
      throw DomainError("decay envelope needs 0 < sigma1 <= sigma2 < 1 and threshold >= 0");
  }
  if (poly_ && (!(poly_->C > 0.0) || !(poly_->epsilon > 0.0) || poly_->threshold < 0.0))
    throw DomainError("polynomial witness needs C > 0, epsilon > 0, threshold >= 0");
}

double WeightFunction::second_derivative(double x) const {
  if (!f2_) throw DomainError("weight '" + descriptor_ + "' has no closed-form second derivative");
  return f2_(x);
}

std::vector<double> admissibility_grid() {
  std::vector<double> g;
  for (int e = -6; e <= 6; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

void WeightFunction::validate() const {
  double prev = INFINITY;
  for (double x : admissibility_grid()) {
    const double v = f_(x);
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("weight '" + descriptor_ + "' is not positive at x=" + format_double(x));
    if (v > prev) throw DomainError("weight '" + descriptor_ + "' increases near x=" + format_double(x));
    prev = v;
  }
  if (envelope_) {
    const auto& e = *envelope_;
    for (int i = 0; i < kEnvelopeSamples; ++i) {
      const double x = e.threshold + i;
      const double v = f_(x);
      if (std::pow(e.sigma1, x) > v * (1.0 + kEnvelopeSlack) || v > std::pow(e.sigma2, x) * (1.0 + kEnvelopeSlack))
        throw DomainError("weight '" + descriptor_ + "' leaves its decay envelope at x=" + format_double(x));
    }
  }
}

WeightFunction exp_decay(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("exp_decay needs sigma in (0,1)");
  const double ls = std::log(sigma);
  return WeightFunction(
      "exp:" + format_double(sigma), [ls](double x) { return std::exp(ls * x); }, DecayEnvelope{sigma, sigma, 0.0},
      std::nullopt, true, [ls](double x) { return ls * ls * std::exp(ls * x); });
}

WeightFunction mcshane() {
  // 1/(e^x+1) <= e^-x everywhere; e^-1.1x <= 1/(e^x+1) once e^0.1x >= 1+e^-x, i.e. from x = 2 on.
  // x^4/(e^x+1) peaks near x = 3.9 at about 4.6.
  return WeightFunction(
      "mcshane", [](double x) { return 1.0 / (std::exp(x) + 1.0); },
      DecayEnvelope{std::exp(-1.1), std::exp(-1.0), 2.0}, PolyDecay{4.7, 1.0, 0.0}, true, [](double x) {
        const double u = std::exp(-x);
        return u * (1.0 - u) / ((1.0 + u) * (1.0 + u) * (1.0 + u));
      });
}

WeightFunction power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("power weight needs p > 0");
  std::optional<PolyDecay> poly;
  if (p > 3.0) poly = PolyDecay{1.0, p - 3.0, 0.0};
  return WeightFunction(
      "pow:" + format_double(p), [p](double x) { return std::pow(x, -p); }, std::nullopt, poly, true,
      [p](double x) { return p * (p + 1.0) * std::pow(x, -p - 2.0); });
}

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw DomainError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

}  // namespace

WeightFunction parse_weight(std::string_view text) {
  if (text == "mcshane") return mcshane();
  if (text.starts_with("exp:")) return exp_decay(parse_number(text.substr(4), "exp sigma"));
  if (text.starts_with("pow:")) return power(parse_number(text.substr(4), "power exponent"));
  throw DomainError("unknown weight '" + std::string(text) + "' (expected exp:<sigma>, mcshane or pow:<p>)");
}

AdmissibilityReport check_admissible(const WeightFunction& f) {
  AdmissibilityReport r;
  const auto grid = admissibility_grid();
  double prev = INFINITY;
  for (double x : grid) {
    const double v = f(x);
    if (!(v > 0.0)) {
      r.positive = false;
      r.failure = "f not positive at x=" + format_double(x);
    }
    if (v > prev) {
      r.monotone = false;
      r.failure = "f increases near x=" + format_double(x);
    }
    prev = v;
    double second;
    if (f.has_second_derivative()) {
      second = f.second_derivative(x);
    } else {
      const double h = x * 1e-3;
      second = (f(x + h) - 2.0 * v + f(x - h)) / (h * h);
    }
    // 2^6 already lies deep in the tail of the exponential weights, where f'' may underflow
    if (!(second > 0.0) && v > 1e-250) {
      r.convex = false;
      r.failure = "f'' not positive at x=" + format_double(x);
    }
  }
  if (!f.poly_decay()) {
    r.decay = false;
    r.failure = "no polynomial decay witness x^(3+eps) f(x) -> 0";
    return r;
  }
  const auto& w = *f.poly_decay();
  std::vector<double> scaled;
  for (double x : grid) {
    if (x < w.threshold) continue;
    if (std::pow(x, 3.0 + w.epsilon) * f(x) > w.C * (1.0 + kEnvelopeSlack)) {
      r.decay = false;
      r.failure = "x^(3+eps) f(x) exceeds the witness constant at x=" + format_double(x);
    }
    // the witness bounds x^(3+eps) f by C, so x^(3+eps/2) f must tend to 0
    scaled.push_back(std::pow(x, 3.0 + w.epsilon / 2.0) * f(x));
  }
  if (scaled.size() >= 3) {
    const std::size_t n = scaled.size();
    if (!(scaled[n - 1] < scaled[n - 2] && scaled[n - 2] < scaled[n - 3])) {
      r.decay = false;
      r.failure = "x^(3+eps/2) f(x) is not decreasing on the last grid points";
    }
  }
  return r;
}

}  // namespace rosesum
