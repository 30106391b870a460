#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rosesum/words.hpp"

namespace rosesum {

class CensusTable;

/// Positive petal lengths on the k-petal rose. `on_simplex()` asserts volume one.
class MetricStructure {
 public:
  explicit MetricStructure(std::vector<double> lengths);

  /// Validates that the lengths sum to 1 within 1e-12.
  static MetricStructure on_simplex(std::vector<double> lengths);

  int rank() const noexcept { return static_cast<int>(lengths_.size()); }
  std::span<const double> lengths() const noexcept { return lengths_; }
  double length(int generator) const { return lengths_.at(static_cast<std::size_t>(generator - 1)); }
  double min_length() const noexcept { return min_; }
  double max_length() const noexcept { return max_; }
  double volume() const noexcept;
  bool is_on_simplex() const noexcept;

  friend bool operator==(const MetricStructure&, const MetricStructure&) = default;

 private:
  std::vector<double> lengths_;
  double min_ = 0.0;
  double max_ = 0.0;
};

inline constexpr double kSimplexTolerance = 1e-12;

MetricStructure barycenter(int rank);
/// (t, ..., t, 1-(k-1)t) for 0 < t < 1/(k-1).
MetricStructure boundary_family_conj(int rank, double t);
/// (t/2, ..., t/2, 1/2-(k-2)t/2, 1/2) for k >= 3 and 0 < t < 1/(k-2).
MetricStructure boundary_family_prim(int rank, double t);

double word_length(const MetricStructure& metric, const Word& w);
double class_length(const MetricStructure& metric, const CyclicWord& c);
/// m . lengths, summed in generator order. Every route that decides
/// membership ℓ <= R goes through this so the routes agree bit for bit.
double class_length(const MetricStructure& metric, std::span<const int> occurrence);

/// Dense 2k x 2k non-backtracking transition matrix on directed petals.
/// Entry (e, f) is exp(-s * length(f)) when f != e^-1, else 0. Row-major,
/// indexed by letter code.
std::vector<double> transition_matrix(std::span<const double> lengths, double s);

/// Collatz-Wielandt enclosure of the Perron root of a non-negative matrix
/// together with the positive vector that certifies it: lower <= rho <= upper
/// and (A v)_e <= upper * v_e for every e.
struct PerronBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> vector;
  int iterations = 0;
};

PerronBounds perron_bounds(std::span<const double> matrix, std::size_t dim, double rel_tol = 1e-13,
                           int max_iterations = 100000);

/// Spectral radius of transition_matrix(lengths, s).
double spectral_radius(std::span<const double> lengths, double s);

/// Volume entropy h: the root of sum_i 1/(1+exp(s x_i)) = 1/2, by bisection.
/// Lengths need not sum to one.
double entropy(const MetricStructure& metric);
double entropy(std::span<const double> lengths);

/// Volume entropy from the other route: the s at which the spectral radius of
/// transition_matrix(lengths, s) equals 1, by bisection.
double entropy_spectral(std::span<const double> lengths);

struct EntropyEstimate {
  double h_solver = 0.0;
  double h_words = 0.0;    ///< log #{g in F_k : L(g) <= R} / R
  double h_cyclic = 0.0;   ///< same over cyclically reduced words
  double h_classes = 0.0;  ///< same over conjugacy classes
  double radius_used = 0.0;
  Count words;
  Count cyclic;
  Count classes;
};

/// Finite-radius entropy estimates from exact census counts. Throws
/// InsufficientData unless the census reaches every word of L-length <= R.
EntropyEstimate empirical_entropy(const MetricStructure& metric, double radius, const CensusTable& census);

}  // namespace rosesum
