#include "rosesum/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "rosesum/census.hpp"
#include "rosesum/errors.hpp"
#include "rosesum/whitehead.hpp"

namespace rosesum {

namespace {

double hypothesis_bound(int rank) { return std::pow(2.0 * rank - 1.0, -rank); }

void check_sigma(int rank, double sigma) {
  const double bound = hypothesis_bound(rank);
  if (!(sigma > 0.0 && sigma < bound)) {
    std::ostringstream os;
    os.precision(12);
    os << "hypothesis violated: sigma = " << sigma << " must lie below (2k-1)^-k = " << bound << " for k = " << rank;
    throw HypothesisViolation(os.str());
  }
}

CensusStore& resolve(CensusStore* store, std::optional<CensusStore>& local, unsigned threads) {
  if (store) return *store;
  local.emplace(std::nullopt, threads);
  return *local;
}

PointEstimate point_estimate(SeriesKind kind, const MetricStructure& metric, const WeightFunction& f, double target,
                             const SumBudget& budget, CensusStore& store) {
  PointEstimate p;
  const auto x = metric.lengths();
  p.lengths.assign(x.begin(), x.end());
  p.entropy = entropy(metric);
  p.verdict = classify_convergence(kind, metric, f);
  p.estimate = estimate(kind, metric, f, target, budget, &store);
  return p;
}

/// Second differences, margins, argmin; symmetry across the grid midpoint when asked.
void finish_convexity(ConvexityReport& r, bool symmetric) {
  const std::size_t n = r.values.size();
  r.second_differences.clear();
  r.required_margins.clear();
  r.all_positive = n >= 3;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double d2 = r.values[j - 1] - 2.0 * r.values[j] + r.values[j + 1];
    const double margin = 2.0 * (r.tails[j - 1] + 2.0 * r.tails[j] + r.tails[j + 1]);
    r.second_differences.push_back(d2);
    r.required_margins.push_back(margin);
    if (!(d2 > margin)) r.all_positive = false;
  }
  if (n > 0) {
    const auto it = std::min_element(r.values.begin(), r.values.end());
    r.argmin = r.grid[static_cast<std::size_t>(it - r.values.begin())];
  }
  r.symmetry_defect = 0.0;
  if (symmetric)
    for (std::size_t j = 0; j < n; ++j)
      r.symmetry_defect = std::max(r.symmetry_defect, std::abs(r.values[j] - r.values[n - 1 - j]));
  r.all_converged = std::all_of(r.statuses.begin(), r.statuses.end(), [](const std::string& s) {
    return s == to_string(SumStatus::converged);
  });
}

void add_point(ConvexityReport& r, double param, const SumEstimate& e) {
  r.grid.push_back(param);
  r.values.push_back(e.value);
  r.tails.push_back(e.tail_bound);
  r.statuses.emplace_back(to_string(e.status));
}

}  // namespace

NonConstancyReport theoremA_conj(int rank, double sigma, const TheoremAOptions& options, CensusStore* store) {
  if (rank < 2) throw DomainError("rank must be at least 2");
  check_sigma(rank, sigma);
  std::optional<CensusStore> local;
  CensusStore& cs = resolve(store, local, options.budget.threads);
  const WeightFunction f = exp_decay(sigma);

  NonConstancyReport r;
  r.series = "C";
  r.rank = rank;
  r.weight = f.descriptor();
  r.sigma = sigma;
  r.hypothesis_bound = hypothesis_bound(rank);
  r.target_tail = options.target_tail;
  r.point_finite = point_estimate(SeriesKind::C, barycenter(rank), f, options.target_tail, options.budget, cs);

  for (double t : options.t_candidates) {
    if (!(t > 0.0 && t < 1.0 / (rank - 1))) continue;
    const MetricStructure m = boundary_family_conj(rank, t);
    if (classify_convergence(SeriesKind::C, m, f).verdict != Convergence::diverges) continue;
    r.boundary_t = t;
    r.point_divergent = point_estimate(SeriesKind::C, m, f, options.target_tail, options.budget, cs);
    break;
  }
  const auto& fin = r.point_finite.estimate;
  const auto& div = r.point_divergent.estimate;
  r.separated = fin.status == SumStatus::converged && div.status == SumStatus::divergence_certified;
  if (r.separated) {
    r.partial_ratio = div.value / (fin.value + fin.tail_bound);
    r.separation = "C_f is finite at the barycenter and certified divergent at t = " + std::to_string(r.boundary_t) +
                   ", so it is not constant on the simplex";
  } else {
    r.separation = "no separation established within the budget";
  }
  return r;
}

NonConstancyReport theoremA_prim(int rank, double sigma, const TheoremAPrimOptions& options, CensusStore* store) {
  if (rank < 3) throw DomainError("theoremA_prim needs rank k >= 3; at k = 2 P_f is finite everywhere");
  check_sigma(rank, sigma);
  std::optional<CensusStore> local;
  CensusStore& cs = resolve(store, local, options.budget.threads);
  const WeightFunction f = exp_decay(sigma);

  NonConstancyReport r;
  r.series = "P";
  r.rank = rank;
  r.weight = f.descriptor();
  r.sigma = sigma;
  r.hypothesis_bound = hypothesis_bound(rank);
  r.target_tail = options.target_tail;
  r.boundary_t = options.t;

  const MetricStructure center = barycenter(rank);
  r.point_finite = point_estimate(SeriesKind::P, center, f, options.target_tail, options.budget, cs);
  r.dominating_C = estimate(SeriesKind::C, center, f, options.target_tail, options.budget, &cs);

  const MetricStructure edge = boundary_family_prim(rank, options.t);
  r.point_divergent = point_estimate(SeriesKind::P, edge, f, options.target_tail, options.budget, cs);

  // p_R >= b_{R - x_k} on radii placed half a petal away from the length lattice
  const double last = edge.length(rank);
  const auto x = edge.lengths();
  const MetricStructure sub(std::vector<double>(x.begin(), x.end() - 1));
  const double h_sub = entropy(sub);
  const double r_max = std::log(3000.0) / h_sub;
  const int points = std::max(1, options.count_check_points);
  const auto moves = whitehead_automorphisms(rank);
  for (int j = 0; j < points; ++j) {
    const double target_r = points == 1 ? r_max : r_max * j / (points - 1);
    const double r_sub = (std::floor(target_r / sub.min_length()) + 0.5) * sub.min_length();
    CountCheck c;
    c.radius = r_sub + last;
    const auto family = primitive_family_ga_k(edge, c.radius);
    const std::set<CyclicWord> distinct(family.begin(), family.end());
    c.family_count = distinct.size();
    for (const CyclicWord& w : distinct)
      if (is_primitive_by_whitehead(w, moves)) ++c.verified_primitive;
    const Count b = subrose_ball_count(edge, r_sub);
    c.subrose_ball = to_decimal(b);
    c.holds = distinct.size() == family.size() && Count(c.verified_primitive) >= b;
    r.count_inequality_holds = r.count_inequality_holds && c.holds;
    r.count_checks.push_back(std::move(c));
  }

  const auto& fin = r.point_finite.estimate;
  const auto& div = r.point_divergent.estimate;
  const bool bounded = std::isfinite(fin.tail_bound) && r.dominating_C->status == SumStatus::converged;
  r.separated = bounded && div.status == SumStatus::divergence_certified;
  if (r.separated) {
    const double upper = std::min(fin.value + fin.tail_bound, r.dominating_C->value + r.dominating_C->tail_bound);
    r.partial_ratio = div.value / upper;
    r.separation = "P_f <= C_f is finite at the barycenter and the g a_k sub-family diverges at t = " +
                   std::to_string(options.t) + ", so P_f is not constant on the simplex";
  } else {
    r.separation = "no separation established within the budget";
  }
  return r;
}

ConvexityReport theoremB_scan(const WeightFunction& f, double step, const TheoremBOptions& options,
                              CensusStore* store) {
  const AdmissibilityReport adm = check_admissible(f);
  if (!adm.admissible()) throw HypothesisViolation("weight '" + f.descriptor() + "' is not admissible: " + adm.failure);
  if (!(step > 0.0 && step < 0.5)) throw DomainError("grid step must lie in (0, 1/2)");
  const long cells = std::lround(1.0 / step);
  if (std::abs(cells * step - 1.0) > 1e-9) throw DomainError("grid step must divide 1");
  std::optional<CensusStore> local;
  CensusStore& cs = resolve(store, local, 0);

  ConvexityReport r;
  r.series = "P";
  r.weight = f.descriptor();
  r.rank = 2;
  r.step = step;
  r.target_tail = options.target_tail;
  SumBudget budget;
  budget.max_box = options.max_box;
  for (long j = 1; j < cells; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(cells);
    add_point(r, t, estimate(SeriesKind::P, MetricStructure({t, 1.0 - t}), f, options.target_tail, budget, &cs));
  }
  finish_convexity(r, true);
  return r;
}

std::vector<std::vector<double>> tangent_directions(int rank, int count, std::uint64_t seed) {
  if (rank < 2) throw DomainError("rank must be at least 2");
  if (count < 0) throw DomainError("direction count must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> out;
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> d(static_cast<std::size_t>(rank));
    for (double& v : d) v = normal(rng);
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= rank;
    double norm = 0.0;
    for (double& v : d) {
      v -= mean;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& v : d) v /= norm;
    out.push_back(std::move(d));
  }
  return out;
}

TheoremCReport theoremC_scan(int rank, const WeightFunction& f, const TheoremCOptions& options, CensusStore* store) {
  if (rank < 2) throw DomainError("rank must be at least 2");
  if (!f.convex()) throw HypothesisViolation("weight '" + f.descriptor() + "' is not flagged strictly convex");
  if (!f.decay_envelope()) throw HypothesisViolation("weight '" + f.descriptor() + "' has no exponential bound");
  const double bound = hypothesis_bound(rank);
  if (!(f.decay_envelope()->sigma2 < bound))
    throw HypothesisViolation("hypothesis violated: sigma2 must lie below (2k-1)^-k = " + std::to_string(bound));
  if (options.half_points < 1) throw DomainError("half_points must be at least 1");
  std::optional<CensusStore> local;
  CensusStore& cs = resolve(store, local, options.budget.threads);

  TheoremCReport rep;
  rep.rank = rank;
  rep.weight = f.descriptor();
  rep.seed = options.seed;
  rep.half_points = options.half_points;
  rep.target_tail = options.target_tail;
  rep.radius_candidates = options.radius_candidates;
  rep.all_positive_C = rep.all_positive_P = rep.coordinate_convex = rep.decomposition_ok = true;

  const int letters = options.decomposition_letters > 0 ? options.decomposition_letters : (rank == 2 ? 12 : 8);
  const std::vector<double> center(static_cast<std::size_t>(rank), 1.0 / rank);
  auto shifted = [&](const std::vector<double>& d, double s) {
    std::vector<double> x(center);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * d[i];
    return x;
  };
  // an endpoint qualifies when the classifier says converges and the estimate certifies it within budget
  auto admissible_point = [&](const std::vector<double>& x) {
    if (std::any_of(x.begin(), x.end(), [](double v) { return !(v > 1e-9); })) return false;
    const MetricStructure m(x);
    if (classify_convergence(SeriesKind::C, m, f).verdict != Convergence::converges) return false;
    return estimate(SeriesKind::C, m, f, options.target_tail, options.budget, &cs).status == SumStatus::converged;
  };
  std::shared_ptr<const std::set<CyclicWord>> prims;
  if (rank >= 3) {
    const int oracle = options.budget.oracle_length > 0 ? options.budget.oracle_length : default_oracle_length(rank);
    prims = cs.primitives(rank, oracle);
  }

  for (const auto& d : tangent_directions(rank, options.directions, options.seed)) {
    ScanSegment seg;
    seg.direction = d;
    std::vector<double> candidates(options.radius_candidates);
    std::sort(candidates.rbegin(), candidates.rend());
    for (double r : candidates)
      if (admissible_point(shifted(d, r)) && admissible_point(shifted(d, -r))) {
        seg.radius = r;
        break;
      }
    seg.C.series = "C";
    seg.P.series = "P";
    seg.C.weight = seg.P.weight = f.descriptor();
    seg.C.rank = seg.P.rank = rank;
    seg.C.target_tail = options.target_tail;
    seg.P.target_tail = rank == 2 ? options.target_tail : 0.0;
    if (seg.radius == 0.0) {
      rep.inconclusive = true;
      rep.all_positive_C = rep.all_positive_P = rep.coordinate_convex = rep.decomposition_ok = false;
      rep.segments.push_back(std::move(seg));
      continue;
    }
    const double h = seg.radius / options.half_points;
    seg.C.step = seg.P.step = h;
    std::vector<double> coordinate;
    seg.decomposition_ok = true;
    for (int j = -options.half_points; j <= options.half_points; ++j) {
      const double s = h * j;
      const MetricStructure m(shifted(d, s));
      add_point(seg.C, s, estimate(SeriesKind::C, m, f, options.target_tail, options.budget, &cs));
      if (rank == 2) {
        add_point(seg.P, s, estimate(SeriesKind::P, m, f, options.target_tail, options.budget, &cs));
      } else {
        SumEstimate e;
        e.value = partial_sum(std::vector<CyclicWord>(prims->begin(), prims->end()), m, f, INFINITY).value;
        e.tail_bound = 0.0;
        e.status = SumStatus::converged;
        e.terms_used = prims->size();
        add_point(seg.P, s, e);
      }
      double g = 0.0;
      for (double xi : m.lengths()) g += f(xi);
      coordinate.push_back(g);

      DecompositionCheck dc;
      dc.s = s;
      dc.radius = letters * m.min_length();
      const auto census = cs.get(rank, ClassKind::all, letters + 1);
      dc.census_sum = census_partial_sum(*census, m, f, dc.radius).value;
      dc.enumerated_sum = enumerated_partial_sum(m, ClassKind::all, f, dc.radius).value;
      dc.difference = std::abs(dc.census_sum - dc.enumerated_sum);
      dc.ok = dc.difference <= 1e-12 * std::max(1.0, std::abs(dc.enumerated_sum));
      seg.decomposition_ok = seg.decomposition_ok && dc.ok;
      seg.decomposition.push_back(dc);
    }
    finish_convexity(seg.C, false);
    finish_convexity(seg.P, false);
    seg.coordinate_convex = true;
    for (std::size_t j = 1; j + 1 < coordinate.size(); ++j) {
      const double d2 = coordinate[j - 1] - 2.0 * coordinate[j] + coordinate[j + 1];
      seg.coordinate_second_differences.push_back(d2);
      if (!(d2 > 0.0)) seg.coordinate_convex = false;
    }
    rep.all_positive_C = rep.all_positive_C && seg.C.all_positive && seg.C.all_converged;
    rep.all_positive_P = rep.all_positive_P && seg.P.all_positive && seg.P.all_converged;
    rep.coordinate_convex = rep.coordinate_convex && seg.coordinate_convex;
    rep.decomposition_ok = rep.decomposition_ok && seg.decomposition_ok;
    rep.segments.push_back(std::move(seg));
  }
  return rep;
}

BlowupTable entropy_blowup_curve(int rank, const std::vector<double>& t_grid) {
  if (rank < 2) throw DomainError("rank must be at least 2");
  std::vector<double> ts(t_grid);
  std::sort(ts.begin(), ts.end());
  BlowupTable out;
  out.rank = rank;
  out.barycenter_entropy = entropy(barycenter(rank));
  for (double t : ts) {
    if (!(t > 0.0 && t < 1.0 / (rank - 1))) throw DomainError("t must lie in (0, 1/(k-1))");
    out.rows.push_back({t, entropy(boundary_family_conj(rank, t))});
  }
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (!(out.rows[i].entropy < out.rows[i - 1].entropy)) out.strictly_decreasing = false;
  return out;
}

}  // namespace rosesum
