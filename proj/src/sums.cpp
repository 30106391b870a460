#include "rosesum/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rosesum/errors.hpp"
#include "rosesum/pairwise_sum.hpp"

namespace rosesum {

std::string_view to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::C:
      return "C";
    case SeriesKind::P:
      return "P";
    case SeriesKind::S:
      return "S";
  }
  return "C";
}

std::string_view to_string(SumStatus status) {
  switch (status) {
    case SumStatus::converged:
      return "converged";
    case SumStatus::divergence_certified:
      return "divergence_certified";
    case SumStatus::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(Convergence verdict) {
  switch (verdict) {
    case Convergence::converges:
      return "converges";
    case Convergence::diverges:
      return "diverges";
    case Convergence::unknown:
      return "unknown";
  }
  return "unknown";
}

SeriesKind parse_series_kind(std::string_view text) {
  if (text == "C") return SeriesKind::C;
  if (text == "P") return SeriesKind::P;
  if (text == "S") return SeriesKind::S;
  throw DomainError("unknown series kind '" + std::string(text) + "' (expected C, P or S)");
}

int default_max_letters(int rank) {
  switch (rank) {
    case 2:
      return 400;
    case 3:
      return 120;
    case 4:
      return 60;
    default:
      return 30;
  }
}

int default_oracle_length(int rank) {
  switch (rank) {
    case 2:
      return 10;
    case 3:
      return 7;
    case 4:
      return 4;
    default:
      return 3;
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Guards every "length at least" comparison against rounding in m·x.
constexpr double kRoundingGuard = 1e-12;

double log_word_count(int k, long n) {
  return std::log(2.0 * k) + static_cast<double>(n - 1) * std::log(2.0 * k - 1.0);
}

/// Σ_{n >= n0} 2k(2k-1)^(n-1) f(max(R, n m)), switching to a geometric
/// closed form once the envelope applies.
double word_count_bound(const MetricStructure& metric, const WeightFunction& f, double radius) {
  const auto& env = *f.decay_envelope();
  const int k = metric.rank();
  const double m = metric.min_length();
  const double ls2 = std::log(env.sigma2);
  const double log_ratio = std::log(2.0 * k - 1.0) + m * ls2;
  const long n0 = std::max<long>(1, static_cast<long>(std::floor(radius / metric.max_length())));
  const double limit = std::max(radius, env.threshold) / m + 2.0;
  if (limit > 1e7) return kInf;
  long double acc = 0.0L;
  for (long n = n0;; ++n) {
    const double lower = static_cast<double>(n) * m * (1.0 - kRoundingGuard);
    const double x = std::max(radius, lower);
    if (lower >= radius && lower >= env.threshold) {
      if (log_ratio >= 0.0) return kInf;
      const double log_first = log_word_count(k, n) + lower * ls2;
      if (log_first > 700.0) return kInf;
      acc += std::exp(log_first) / -std::expm1(log_ratio);
      break;
    }
    const double fx = f(x);
    if (fx > 0.0) {
      const double log_term = log_word_count(k, n) + std::log(fx);
      if (log_term > 700.0) return kInf;
      acc += std::exp(log_term);
    }
  }
  const double out = static_cast<double>(acc);
  return std::isfinite(out) ? out : kInf;
}

/// Rankin-type bound: for l > R >= threshold, f(l) <= sigma2^l <= e^{-delta R} e^{-s l}
/// with s = ln(1/sigma2) - delta, and Σ_classes e^{-s l} <= Σ_n tr A(s)^n <= 2k lambda/(1-lambda).
double rankin_bound(const MetricStructure& metric, const WeightFunction& f, double radius) {
  const auto& env = *f.decay_envelope();
  const int k = metric.rank();
  const double s0 = -std::log(env.sigma2);
  const double h = entropy(metric);
  if (!(h < s0)) return kInf;
  const double r_eff = std::max(radius, env.threshold);
  double band = 0.0;
  if (radius < env.threshold) {
    // classes with R < l <= threshold have word length <= threshold/m
    const long n_max = static_cast<long>(std::floor(env.threshold / metric.min_length())) + 1;
    const double log_count = log_word_count(k, n_max) - std::log1p(-1.0 / (2.0 * k - 1.0));
    const double fr = f(std::max(radius, 0.0));
    if (log_count + std::log(fr) > 700.0) return kInf;
    band = std::exp(log_count) * fr;
  }
  const auto x = metric.lengths();
  double best = kInf;
  constexpr int kSteps = 64;
  for (int j = 1; j < kSteps; ++j) {
    const double delta = (s0 - h) * j / kSteps;
    const auto a = transition_matrix(x, s0 - delta);
    const double lambda = perron_bounds(a, 2 * x.size()).upper * (1.0 + 1e-12);
    if (!(lambda < 1.0)) continue;
    const double log_b = -delta * r_eff + std::log(2.0 * k * lambda) - std::log1p(-lambda);
    best = std::min(best, std::exp(log_b));
  }
  return best + band;
}

double closed_envelope_tail(double c, double sigma2, long a) {
  // 8 Σ_{M>=a} M r^M = 8 r^a (a(1-r) + r)/(1-r)^2
  const double r = std::pow(sigma2, c);
  const double one_minus = -std::expm1(c * std::log(sigma2));
  return 8.0 * std::pow(r, static_cast<double>(a)) * (a * one_minus + r) / (one_minus * one_minus);
}

double visible_tail(double x1, double x2, const WeightFunction& f, long box) {
  if (!f.decay_envelope() && !f.poly_decay())
    throw NoCertificate("no certificate: weight '" + f.descriptor() + "' has neither a decay envelope nor a polynomial witness");
  const double c = std::min(x1, x2);
  double best = kInf;
  auto direct_until = [&](double threshold, long& start) {
    long double acc = 0.0L;
    for (start = box + 1; c * start * (1.0 - kRoundingGuard) < threshold; ++start)
      acc += 8.0L * start * f(c * start * (1.0 - kRoundingGuard));
    return static_cast<double>(acc);
  };
  if (const auto& env = f.decay_envelope()) {
    long a = 0;
    const double head = direct_until(env->threshold, a);
    best = std::min(best, head + closed_envelope_tail(c * (1.0 - kRoundingGuard), env->sigma2, a));
  }
  if (const auto& poly = f.poly_decay()) {
    long a = 0;
    double head = direct_until(poly->threshold, a);
    if (a < 2) {
      head += 8.0 * a * f(c * a * (1.0 - kRoundingGuard));
      a = 2;
    }
    // Σ_{M>=a} M^{-2-eps} <= ∫_{a-1}^∞ x^{-2-eps} dx
    const double e = poly->epsilon;
    const double tail = 8.0 * poly->C * std::pow(c * (1.0 - kRoundingGuard), -3.0 - e) *
                        std::pow(static_cast<double>(a - 1), -1.0 - e) / (1.0 + e);
    best = std::min(best, head + tail);
  }
  return best;
}

CensusStore& resolve_store(CensusStore* store, std::optional<CensusStore>& local, unsigned threads) {
  if (store) return *store;
  local.emplace(std::nullopt, threads);
  return *local;
}

int census_size_for(const MetricStructure& metric, double radius) {
  return static_cast<int>(std::floor(radius / metric.min_length() * (1.0 + kRoundingGuard))) + 1;
}

MetricStructure subrose_of(const MetricStructure& metric) {
  const auto x = metric.lengths();
  return MetricStructure(std::vector<double>(x.begin(), x.end() - 1));
}

ClassKind census_kind(SeriesKind kind) { return kind == SeriesKind::S ? ClassKind::rootfree : ClassKind::all; }

/// Σ_{|m| > min_total, m·x <= radius} q_m f(m·x).
double census_mass_beyond(const CensusTable& census, const MetricStructure& metric, const WeightFunction& f,
                          double radius, int min_total) {
  PairwiseSum acc;
  const auto& index = census.index();
  const auto q = census.classes_as_double();
  for (std::size_t i = index.layer_begin(std::min(min_total + 1, census.max_total())); i < index.size(); ++i) {
    if (index.total(i) <= min_total || q[i] == 0.0) continue;
    const double len = class_length(metric, index.vector(i));
    if (len <= radius) acc.add(q[i] * f(len));
  }
  return acc.total();
}

/// Smallest radius (to 1e-3 relative) in [start, r_max] whose tail is at most target.
std::optional<double> search_radius(const std::function<double(double)>& tail, double start, double r_max,
                                    double target) {
  double hi = std::min(start, r_max);
  double lo = 0.0;
  while (tail(hi) > target) {
    if (hi >= r_max) return std::nullopt;
    lo = hi;
    hi = std::min(2.0 * hi, r_max);
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

void check_target(double target_tail) {
  if (!(target_tail > 0.0)) throw DomainError("target tail must be positive");
}

}  // namespace

PartialSum partial_sum(std::span<const CyclicWord> classes, const MetricStructure& metric, const WeightFunction& f,
                       double radius) {
  PairwiseSum acc;
  for (const CyclicWord& c : classes) {
    const double len = class_length(metric, c);
    if (len <= radius) acc.add(f(len));
  }
  return {acc.total(), acc.count()};
}

PartialSum enumerated_partial_sum(const MetricStructure& metric, ClassKind kind, const WeightFunction& f,
                                  double radius) {
  PairwiseSum acc;
  for_each_class(metric, radius, kind, [&](const CyclicWord& c) { acc.add(f(class_length(metric, c))); });
  return {acc.total(), acc.count()};
}

PartialSum census_partial_sum(const CensusTable& census, const MetricStructure& metric, const WeightFunction& f,
                              double radius) {
  if (census.rank() != metric.rank()) throw DomainError("census rank does not match the metric");
  PairwiseSum acc;
  Count terms = 0;
  const auto& index = census.index();
  const auto q = census.classes_as_double();
  const auto exact = census.classes();
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (q[i] == 0.0) continue;
    const double len = class_length(metric, index.vector(i));
    if (len > radius) continue;
    acc.add(q[i] * f(len));
    terms += exact[i];
  }
  return {acc.total(), terms};
}

PartialSum visible_partial_sum(const MetricStructure& metric, const WeightFunction& f, long box) {
  if (metric.rank() != 2) throw DomainError("visible-point sums need rank 2");
  if (box < 0) throw DomainError("box size must be non-negative");
  const double x1 = metric.length(1), x2 = metric.length(2);
  PairwiseSum acc;
  for (long p = -box; p <= box; ++p)
    for (long q = -box; q <= box; ++q) {
      if (std::gcd(p, q) != 1) continue;
      acc.add(f(x1 * std::labs(p) + x2 * std::labs(q)));
    }
  return {acc.total(), acc.count()};
}

double tail_bound_Cf(const MetricStructure& metric, const WeightFunction& f, double radius) {
  if (!f.decay_envelope())
    throw NoCertificate("no certificate: weight '" + f.descriptor() + "' carries no decay envelope");
  radius = std::max(radius, 0.0);
  return std::min(word_count_bound(metric, f, radius), rankin_bound(metric, f, radius));
}

double tail_bound_Pf_k2(double t, const WeightFunction& f, long box) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("t must lie in (0,1)");
  return visible_tail(t, 1.0 - t, f, box);
}

double tail_bound_Pf_k2(const MetricStructure& metric, const WeightFunction& f, long box) {
  if (metric.rank() != 2) throw DomainError("visible-point tails need rank 2");
  return visible_tail(metric.length(1), metric.length(2), f, box);
}

ConvergenceVerdict classify_convergence(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f) {
  ConvergenceVerdict v;
  const int k = metric.rank();
  v.entropy = entropy(metric);
  if (const auto& env = f.decay_envelope()) {
    v.rate_upper = -std::log(env->sigma2);
    v.rate_lower = -std::log(env->sigma1);
  }
  if (kind == SeriesKind::P && k == 2) {
    if (f.decay_envelope() || f.poly_decay()) {
      v.verdict = Convergence::converges;
      v.basis = "visible points in a box of size M number at most 8M per shell and f decays faster than x^-3";
    } else {
      v.basis = "no decay witness";
    }
    return v;
  }
  if (!f.decay_envelope()) {
    v.basis = "no decay envelope";
    return v;
  }
  if (v.entropy < v.rate_upper - v.margin) {
    v.verdict = Convergence::converges;
    v.basis = kind == SeriesKind::P ? "P_f <= C_f and entropy below ln(1/sigma2)" : "entropy below ln(1/sigma2)";
    return v;
  }
  if (kind == SeriesKind::P) {
    const auto x = metric.lengths();
    v.subrose_entropy = entropy(x.first(x.size() - 1));
    if (v.subrose_entropy > v.rate_lower + v.margin) {
      v.verdict = Convergence::diverges;
      v.basis = "the g a_k sub-family grows at the sub-rose entropy, above ln(1/sigma1)";
    } else {
      v.basis = "sub-rose entropy does not exceed ln(1/sigma1)";
    }
    return v;
  }
  if (v.entropy > v.rate_lower + v.margin) {
    v.verdict = Convergence::diverges;
    v.basis = "entropy above ln(1/sigma1)";
  } else {
    v.basis = "entropy between ln(1/sigma2) and ln(1/sigma1)";
  }
  return v;
}

PartialSum ga_k_partial_sum(const MetricStructure& metric, const WeightFunction& f, double radius, CensusStore* store) {
  const int k = metric.rank();
  if (k < 3) throw DomainError("the g a_k family needs rank k >= 3");
  const double last = metric.length(k);
  if (radius < last) return {};
  std::optional<CensusStore> local;
  CensusStore& cs = resolve_store(store, local, 0);
  const MetricStructure sub = subrose_of(metric);
  const auto census = cs.get(k - 1, ClassKind::all, census_size_for(sub, radius - last));
  PairwiseSum acc;
  Count terms = 1;
  acc.add(f(last));  // g = identity
  const auto& index = census->index();
  const auto reduced = census->reduced_words();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const double len = class_length(sub, index.vector(i)) + last;
    if (len > radius || reduced[i] == 0) continue;
    acc.add(to_double(reduced[i]) * f(len));
    terms += reduced[i];
  }
  return {acc.total(), terms};
}

namespace {

SumEstimate divergent_estimate(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f,
                               const ConvergenceVerdict& v, const SumBudget& budget, CensusStore& store) {
  SumEstimate est;
  est.status = SumStatus::divergence_certified;
  est.tail_bound = kInf;
  DivergenceCertificate cert;
  cert.rate = v.rate_lower;
  const int k = metric.rank();
  if (kind == SeriesKind::P) {
    const MetricStructure sub = subrose_of(metric);
    const int letters = budget.max_letters > 0 ? budget.max_letters : default_max_letters(k - 1);
    const double radius = letters * sub.min_length() + metric.length(k);
    const PartialSum ps = ga_k_partial_sum(metric, f, radius, &store);
    cert.entropy = v.subrose_entropy;
    cert.family = "g a_k, g in the free group on the first k-1 petals";
    est.value = ps.value;
    est.terms_used = ps.terms;
    est.R_used = radius;
  } else {
    const int letters = budget.max_letters > 0 ? budget.max_letters : default_max_letters(k);
    const double radius = letters * metric.min_length();
    const auto census = store.get(k, census_kind(kind), letters);
    const PartialSum ps = census_partial_sum(*census, metric, f, radius);
    cert.entropy = v.entropy;
    cert.family = kind == SeriesKind::S ? "root-free classes" : "all classes";
    est.value = ps.value;
    est.terms_used = ps.terms;
    est.R_used = radius;
  }
  cert.gap = cert.entropy - cert.rate;
  cert.largest_partial = est.value;
  cert.radius_reached = est.R_used;
  est.certificate = cert;
  est.note = v.basis;
  return est;
}

SumEstimate census_estimate_at(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f,
                               double radius, CensusStore& store) {
  SumEstimate est;
  const auto census = store.get(metric.rank(), census_kind(kind), census_size_for(metric, radius));
  const PartialSum ps = census_partial_sum(*census, metric, f, radius);
  est.value = ps.value;
  est.terms_used = ps.terms;
  est.R_used = radius;
  est.tail_bound = f.decay_envelope() ? tail_bound_Cf(metric, f, radius) : kInf;
  return est;
}

/// P at rank >= 3: exact sum over the Whitehead oracle range plus the C mass
/// of every longer class up to `radius` and the certified C tail past it.
SumEstimate oracle_P_estimate_at(const MetricStructure& metric, const WeightFunction& f, double radius,
                                 const SumBudget& budget, CensusStore& store) {
  const int k = metric.rank();
  const int oracle = budget.oracle_length > 0 ? budget.oracle_length : default_oracle_length(k);
  const auto prims = store.primitives(k, oracle);
  PairwiseSum acc;
  for (const CyclicWord& c : *prims) acc.add(f(class_length(metric, c)));
  SumEstimate est;
  est.value = acc.total();
  est.terms_used = acc.count();
  est.R_used = radius;
  const auto census = store.get(k, ClassKind::all, std::max(census_size_for(metric, radius), oracle + 1));
  const double beyond = census_mass_beyond(*census, metric, f, radius, oracle);
  est.tail_bound = beyond + (f.decay_envelope() ? tail_bound_Cf(metric, f, radius) : kInf);
  est.note = "exact over primitive classes of word length <= " + std::to_string(oracle) +
             "; the tail is dominated by the classes beyond";
  return est;
}

}  // namespace

SumEstimate estimate_at(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f, double radius,
                        const SumBudget& budget, CensusStore* store) {
  std::optional<CensusStore> local;
  CensusStore& cs = resolve_store(store, local, budget.threads);
  SumEstimate est;
  if (kind == SeriesKind::P && metric.rank() == 2) {
    const long box = std::max<long>(0, std::lround(radius));
    const PartialSum ps = visible_partial_sum(metric, f, box);
    est.value = ps.value;
    est.terms_used = ps.terms;
    est.R_used = static_cast<double>(box);
    est.tail_bound = tail_bound_Pf_k2(metric, f, box);
  } else if (kind == SeriesKind::P) {
    est = oracle_P_estimate_at(metric, f, radius, budget, cs);
  } else {
    est = census_estimate_at(kind, metric, f, radius, cs);
  }
  est.status = std::isfinite(est.tail_bound) ? SumStatus::converged : SumStatus::inconclusive;
  return est;
}

SumEstimate estimate(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f, double target_tail,
                     const SumBudget& budget, CensusStore* store) {
  check_target(target_tail);
  f.validate();
  std::optional<CensusStore> local;
  CensusStore& cs = resolve_store(store, local, budget.threads);
  const int k = metric.rank();
  const ConvergenceVerdict v = classify_convergence(kind, metric, f);
  if (v.verdict == Convergence::diverges) return divergent_estimate(kind, metric, f, v, budget, cs);

  if (kind == SeriesKind::P && k == 2) {
    if (v.verdict != Convergence::converges) {
      SumEstimate est;
      est.note = v.basis;
      return est;
    }
    auto tail = [&](long n) { return tail_bound_Pf_k2(metric, f, n); };
    long hi = 8, lo = 0;
    while (tail(hi) > target_tail) {
      if (hi >= budget.max_box) {
        SumEstimate est = estimate_at(kind, metric, f, static_cast<double>(budget.max_box), budget, &cs);
        est.status = SumStatus::inconclusive;
        est.note = "box budget exhausted before the target tail";
        return est;
      }
      lo = hi;
      hi = std::min(2 * hi, budget.max_box);
    }
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (tail(mid) <= target_tail ? hi : lo) = mid;
    }
    return estimate_at(kind, metric, f, static_cast<double>(hi), budget, &cs);
  }

  const int letters = budget.max_letters > 0 ? budget.max_letters : default_max_letters(k);
  const double r_max = letters * metric.min_length();
  if (v.verdict != Convergence::converges || !f.decay_envelope()) {
    SumEstimate est = estimate_at(kind, metric, f, r_max, budget, &cs);
    est.status = SumStatus::inconclusive;
    est.note = v.basis;
    return est;
  }
  const auto radius = search_radius([&](double r) { return tail_bound_Cf(metric, f, r); }, metric.max_length(),
                                    r_max, target_tail);
  SumEstimate est = estimate_at(kind, metric, f, radius.value_or(r_max), budget, &cs);
  if (!radius) {
    est.status = SumStatus::inconclusive;
    est.note = "letter budget exhausted before the target tail";
  } else if (est.tail_bound > target_tail) {
    // P at rank >= 3 keeps the C mass beyond the oracle range in its tail
    est.status = SumStatus::inconclusive;
  }
  if (est.note.empty()) est.note = v.basis;
  return est;
}

double gpq(double t, long p, long q, const WeightFunction& f) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("t must lie in (0,1)");
  const double ap = std::labs(p), aq = std::labs(q);
  return f(t * ap + (1.0 - t) * aq) + f(t * aq + (1.0 - t) * ap);
}

double gpq_second(double t, long p, long q, const WeightFunction& f) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("t must lie in (0,1)");
  const double ap = std::labs(p), aq = std::labs(q);
  const double d2 = (ap - aq) * (ap - aq);
  return f.second_derivative(t * ap + (1.0 - t) * aq) * d2 + f.second_derivative(t * aq + (1.0 - t) * ap) * d2;
}

}  // namespace rosesum
