#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rosesum/census_store.hpp"
#include "rosesum/metric.hpp"
#include "rosesum/sums.hpp"
#include "rosesum/weights.hpp"

namespace rosesum {

/// A metric point with its classifier verdict and estimate.
struct PointEstimate {
  std::vector<double> lengths;
  double entropy = 0.0;
  ConvergenceVerdict verdict;
  SumEstimate estimate;
};

/// p_R (distinct g a_k classes with ℓ <= R, each checked primitive by
/// Whitehead reduction) against b_{R - x_k} from the rank k-1 census.
struct CountCheck {
  double radius = 0.0;
  std::uint64_t family_count = 0;
  std::uint64_t verified_primitive = 0;
  std::string subrose_ball;  ///< exact decimal b_{R - x_k}
  bool holds = false;
};

struct NonConstancyReport {
  std::string series;  ///< "C" or "P"
  int rank = 0;
  std::string weight;
  double sigma = 0.0;
  double hypothesis_bound = 0.0;  ///< (2k-1)^-k
  double target_tail = 0.0;
  double boundary_t = 0.0;
  PointEstimate point_finite;
  PointEstimate point_divergent;
  std::optional<SumEstimate> dominating_C;  ///< P at rank >= 3: C_f at the finite point
  std::vector<CountCheck> count_checks;
  bool count_inequality_holds = true;
  /// largest divergent partial sum over the finite point's upper bound
  double partial_ratio = 0.0;
  bool separated = false;
  std::string separation;
};

struct TheoremAOptions {
  double target_tail = 1e-6;
  std::vector<double> t_candidates = {0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  SumBudget budget;
};

/// Converged C_f at the barycenter and a divergence certificate on the
/// boundary family. Throws HypothesisViolation unless sigma < (2k-1)^-k.
NonConstancyReport theoremA_conj(int rank, double sigma, const TheoremAOptions& options = {},
                                 CensusStore* store = nullptr);

struct TheoremAPrimOptions {
  double target_tail = 1e-6;
  double t = 0.05;
  int count_check_points = 5;
  SumBudget budget;
};

/// P_f bounded at the barycenter through C_f, divergent on
/// boundary_family_prim(k, t) through the g a_k sub-family. Rank >= 3.
NonConstancyReport theoremA_prim(int rank, double sigma, const TheoremAPrimOptions& options = {},
                                 CensusStore* store = nullptr);

struct ConvexityReport {
  std::string series;
  std::string weight;
  int rank = 0;
  double step = 0.0;
  double target_tail = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> tails;
  std::vector<std::string> statuses;
  /// central differences at the interior grid points
  std::vector<double> second_differences;
  /// 2 (tau_{j-1} + 2 tau_j + tau_{j+1}): the margin a difference must beat
  std::vector<double> required_margins;
  bool all_converged = false;
  bool all_positive = false;
  double argmin = 0.0;
  double symmetry_defect = 0.0;
};

struct TheoremBOptions {
  double target_tail = 1e-8;
  long max_box = 4000;
};

/// P_f(t) on the grid step, 2 step, ..., 1 - step. Throws HypothesisViolation
/// for a weight failing the sampled admissibility checks.
ConvexityReport theoremB_scan(const WeightFunction& f, double step, const TheoremBOptions& options = {},
                              CensusStore* store = nullptr);

struct DecompositionCheck {
  double s = 0.0;
  double radius = 0.0;
  double census_sum = 0.0;
  double enumerated_sum = 0.0;
  double difference = 0.0;
  bool ok = false;
};

struct ScanSegment {
  std::vector<double> direction;
  double radius = 0.0;  ///< 0 when no candidate radius converges
  ConvexityReport C;
  ConvexityReport P;  ///< rank 2: visible points; rank >= 3: the oracle range, no tail
  std::vector<double> coordinate_second_differences;
  bool coordinate_convex = false;
  std::vector<DecompositionCheck> decomposition;
  bool decomposition_ok = false;
};

struct TheoremCReport {
  int rank = 0;
  std::string weight;
  std::uint64_t seed = 0;
  int half_points = 0;
  double target_tail = 0.0;
  std::vector<double> radius_candidates;
  std::vector<ScanSegment> segments;
  bool all_positive_C = false;
  bool all_positive_P = false;
  bool coordinate_convex = false;
  bool decomposition_ok = false;
  bool inconclusive = false;
};

struct TheoremCOptions {
  int directions = 3;
  std::uint64_t seed = 0;
  int half_points = 4;  ///< grid s_j = j r / half_points, |j| <= half_points
  double target_tail = 1e-9;
  std::vector<double> radius_candidates = {0.3, 0.2, 0.1, 0.05};
  int decomposition_letters = 0;  ///< 0 picks 12 at rank 2 and 8 above
  SumBudget budget;
};

/// C_f (and P_f) along seeded random segments through the barycenter.
/// Throws HypothesisViolation unless f is convex with sigma2 < (2k-1)^-k.
TheoremCReport theoremC_scan(int rank, const WeightFunction& f, const TheoremCOptions& options = {},
                             CensusStore* store = nullptr);

struct BlowupRow {
  double t = 0.0;
  double entropy = 0.0;
};

struct BlowupTable {
  int rank = 0;
  std::vector<BlowupRow> rows;
  bool strictly_decreasing = false;
  double barycenter_entropy = 0.0;
};

/// h along boundary_family_conj(k, t); t_grid inside (0, 1/(k-1)).
BlowupTable entropy_blowup_curve(int rank, const std::vector<double>& t_grid);

/// Unit vectors in the sum-zero tangent space of the simplex, from a seeded generator.
std::vector<std::vector<double>> tangent_directions(int rank, int count, std::uint64_t seed);

}  // namespace rosesum
