#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rosesum/census.hpp"
#include "rosesum/census_store.hpp"
#include "rosesum/metric.hpp"
#include "rosesum/weights.hpp"

namespace rosesum {

/// C: all nontrivial classes; P: primitive classes; S: root-free classes.
enum class SeriesKind { C, P, S };
enum class SumStatus { converged, divergence_certified, inconclusive };
enum class Convergence { converges, diverges, unknown };

std::string_view to_string(SeriesKind kind);
std::string_view to_string(SumStatus status);
std::string_view to_string(Convergence verdict);
SeriesKind parse_series_kind(std::string_view text);

inline constexpr double kClassifierMargin = 1e-8;

struct ConvergenceVerdict {
  Convergence verdict = Convergence::unknown;
  double entropy = NAN;           ///< h_L of the whole rose
  double subrose_entropy = NAN;   ///< P at rank >= 3: entropy of the first k-1 petals
  double rate_upper = NAN;        ///< ln(1/sigma2)
  double rate_lower = NAN;        ///< ln(1/sigma1)
  double margin = kClassifierMargin;
  std::string basis;
};

struct DivergenceCertificate {
  double entropy = NAN;  ///< growth rate of the witnessing family
  double rate = NAN;     ///< ln(1/sigma1)
  double gap = NAN;      ///< entropy - rate, exceeds the classifier margin
  std::string family;
  double largest_partial = 0.0;
  double radius_reached = 0.0;
};

struct SumEstimate {
  double value = 0.0;
  double tail_bound = INFINITY;
  SumStatus status = SumStatus::inconclusive;
  /// Metric radius of the partial sum; for P at rank 2 the box size N of
  /// the visible points max(|p|,|q|) <= N.
  double R_used = 0.0;
  /// Number of classes summed.
  Count terms_used = 0;
  std::optional<DivergenceCertificate> certificate;
  std::string note;
};

struct SumBudget {
  int max_letters = 0;       ///< word-length cap of the census; 0 picks default_max_letters(k)
  long max_box = 4000;       ///< P at rank 2
  int oracle_length = 0;     ///< P at rank >= 3; 0 picks default_oracle_length(k)
  unsigned threads = 0;
};

int default_max_letters(int rank);
int default_oracle_length(int rank);

struct PartialSum {
  double value = 0.0;
  Count terms = 0;
};

/// Sum of f(ℓ_L(w)) over the listed classes with ℓ_L <= radius.
PartialSum partial_sum(std::span<const CyclicWord> classes, const MetricStructure& metric, const WeightFunction& f,
                       double radius);
/// Same over the streamed necklaces (kinds all | rootfree).
PartialSum enumerated_partial_sum(const MetricStructure& metric, ClassKind kind, const WeightFunction& f,
                                  double radius);
/// Σ q_m f(m·x) over the census vectors with m·x <= radius.
PartialSum census_partial_sum(const CensusTable& census, const MetricStructure& metric, const WeightFunction& f,
                              double radius);
/// Σ f(x1|p| + x2|q|) over the visible points with max(|p|,|q|) <= box.
PartialSum visible_partial_sum(const MetricStructure& metric, const WeightFunction& f, long box);

/// Certified bound on Σ f(ℓ) over classes with ℓ > radius; +inf when no
/// finite certificate exists. Throws NoCertificate without a decay envelope.
double tail_bound_Cf(const MetricStructure& metric, const WeightFunction& f, double radius);

/// Bound on Σ f over the visible points with max(|p|,|q|) > box, at (t, 1-t).
double tail_bound_Pf_k2(double t, const WeightFunction& f, long box);
double tail_bound_Pf_k2(const MetricStructure& metric, const WeightFunction& f, long box);

ConvergenceVerdict classify_convergence(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f);

/// Grows the radius until the certified tail is at most target_tail.
SumEstimate estimate(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f, double target_tail,
                     const SumBudget& budget = {}, CensusStore* store = nullptr);

/// Partial sum and tail at a fixed radius (box size for P at rank 2).
SumEstimate estimate_at(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f, double radius,
                        const SumBudget& budget = {}, CensusStore* store = nullptr);

/// Σ over g in F_{k-1} of f(L(g) + x_k), the g a_k sub-family of primitive
/// classes, up to L(g) + x_k <= radius. Counted through a rank k-1 census.
PartialSum ga_k_partial_sum(const MetricStructure& metric, const WeightFunction& f, double radius,
                            CensusStore* store = nullptr);

double gpq(double t, long p, long q, const WeightFunction& f);
double gpq_second(double t, long p, long q, const WeightFunction& f);

}  // namespace rosesum
