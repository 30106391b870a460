#include "rosesum/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rosesum/census.hpp"
#include "rosesum/errors.hpp"

namespace rosesum {

MetricStructure::MetricStructure(std::vector<double> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.size() < 2) throw DomainError("a metric structure needs rank k >= 2");
  for (double x : lengths_)
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("petal lengths must be positive and finite");
  const auto [lo, hi] = std::minmax_element(lengths_.begin(), lengths_.end());
  min_ = *lo;
  max_ = *hi;
}

MetricStructure MetricStructure::on_simplex(std::vector<double> lengths) {
  MetricStructure m(std::move(lengths));
  if (!m.is_on_simplex())
    throw DomainError("petal lengths must sum to 1 within 1e-12 (got " + std::to_string(m.volume()) + ")");
  return m;
}

double MetricStructure::volume() const noexcept { return std::accumulate(lengths_.begin(), lengths_.end(), 0.0); }

bool MetricStructure::is_on_simplex() const noexcept { return std::abs(volume() - 1.0) <= kSimplexTolerance; }

MetricStructure barycenter(int rank) {
  if (rank < 2) throw DomainError("rank must be at least 2");
  return MetricStructure(std::vector<double>(static_cast<std::size_t>(rank), 1.0 / rank));
}

MetricStructure boundary_family_conj(int rank, double t) {
  if (rank < 2) throw DomainError("rank must be at least 2");
  if (!(t > 0.0) || !(t < 1.0 / (rank - 1)))
    throw DomainError("boundary_family_conj needs 0 < t < 1/(k-1)");
  std::vector<double> x(static_cast<std::size_t>(rank), t);
  x.back() = 1.0 - (rank - 1) * t;
  return MetricStructure(std::move(x));
}

MetricStructure boundary_family_prim(int rank, double t) {
  if (rank < 3) throw DomainError("boundary_family_prim needs rank k >= 3");
  if (!(t > 0.0) || !(t < 1.0 / (rank - 2)))
    throw DomainError("boundary_family_prim needs 0 < t < 1/(k-2)");
  std::vector<double> x(static_cast<std::size_t>(rank), t / 2);
  x[static_cast<std::size_t>(rank - 2)] = 0.5 - (rank - 2) * t / 2;
  x.back() = 0.5;
  return MetricStructure(std::move(x));
}

double word_length(const MetricStructure& metric, const Word& w) {
  if (metric.rank() != w.rank()) throw DomainError("rank mismatch between metric and word");
  return class_length(metric, occurrence_vector(w.letters(), w.rank()));
}

double class_length(const MetricStructure& metric, const CyclicWord& c) {
  if (metric.rank() != c.rank()) throw DomainError("rank mismatch between metric and class");
  return class_length(metric, occurrence_vector(c));
}

double class_length(const MetricStructure& metric, std::span<const int> occurrence) {
  if (static_cast<int>(occurrence.size()) != metric.rank())
    throw DomainError("occurrence vector has the wrong rank");
  const auto x = metric.lengths();
  double len = 0.0;
  for (std::size_t i = 0; i < occurrence.size(); ++i) len += occurrence[i] * x[i];
  return len;
}

std::vector<double> transition_matrix(std::span<const double> lengths, double s) {
  const std::size_t dim = 2 * lengths.size();
  std::vector<double> a(dim * dim, 0.0);
  for (std::size_t e = 0; e < dim; ++e)
    for (std::size_t f = 0; f < dim; ++f)
      if (f != (e ^ 1U)) a[e * dim + f] = std::exp(-s * lengths[f / 2]);
  return a;
}

PerronBounds perron_bounds(std::span<const double> matrix, std::size_t dim, double rel_tol, int max_iterations) {
  PerronBounds out;
  std::vector<double> v(dim, 1.0);
  std::vector<double> w(dim);
  for (int it = 1; it <= max_iterations; ++it) {
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc += matrix[i * dim + j] * v[j];
      w[i] = acc;
    }
    double lo = INFINITY, hi = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double r = w[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      norm = std::max(norm, w[i]);
    }
    out.lower = lo;
    out.upper = hi;
    out.iterations = it;
    out.vector = v;
    if (hi - lo <= rel_tol * hi || norm == 0.0) return out;
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / norm;
  }
  return out;
}

double spectral_radius(std::span<const double> lengths, double s) {
  const auto a = transition_matrix(lengths, s);
  const PerronBounds b = perron_bounds(a, 2 * lengths.size());
  return 0.5 * (b.lower + b.upper);
}

namespace {

constexpr double kBracketLow = 1e-9;
constexpr double kBisectionWidth = 1e-12;

void check_lengths(std::span<const double> lengths) {
  if (lengths.size() < 2) throw DomainError("entropy needs rank k >= 2");
  for (double x : lengths)
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("entropy needs positive petal lengths");
}

/// Bisection for the root of a function decreasing in s, positive at kBracketLow.
template <typename Decreasing>
double bisect_decreasing(Decreasing&& above_root) {
  double lo = kBracketLow;
  double hi = 1.0;
  while (above_root(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw DomainError("entropy bracket failed to close");
  }
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above_root(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double entropy(std::span<const double> lengths) {
  check_lengths(lengths);
  return bisect_decreasing([&](double s) {
    double acc = 0.0;
    for (double x : lengths) acc += 1.0 / (1.0 + std::exp(s * x));
    return acc > 0.5;
  });
}

double entropy(const MetricStructure& metric) { return entropy(metric.lengths()); }

double entropy_spectral(std::span<const double> lengths) {
  check_lengths(lengths);
  return bisect_decreasing([&](double s) { return spectral_radius(lengths, s) > 1.0; });
}

EntropyEstimate empirical_entropy(const MetricStructure& metric, double radius, const CensusTable& census) {
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  if (census.rank() != metric.rank()) throw DomainError("census rank does not match the metric");
  if (!census.has_word_counts()) throw InsufficientData("census carries no word counts");
  if (census.covered_radius(metric) < radius)
    throw InsufficientData("insufficient data: census of total " + std::to_string(census.max_total()) +
                           " covers L-length " + std::to_string(census.covered_radius(metric)) + " < " +
                           std::to_string(radius));
  EntropyEstimate est;
  est.h_solver = entropy(metric);
  est.radius_used = radius;
  est.words = census.reduced_within(metric, radius) + 1;  // the identity has length 0
  est.cyclic = census.cyclic_within(metric, radius);
  est.classes = census.classes_within(metric, radius);
  auto rate = [&](const Count& c) { return c > 0 ? std::log(to_double(c)) / radius : 0.0; };
  est.h_words = rate(est.words);
  est.h_cyclic = rate(est.cyclic);
  est.h_classes = rate(est.classes);
  return est;
}

}  // namespace rosesum
