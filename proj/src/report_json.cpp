#include "rosesum/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace rosesum {

std::string format12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return format12(x);
  // round through the printed form so the JSON carries exactly 12 digits
  return std::strtod(format12(x).c_str(), nullptr);
}

Json numbers(const std::vector<double>& xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(number(x));
  return arr;
}

Json to_json(const SumEstimate& e) {
  Json j;
  j["value"] = number(e.value);
  j["tail_bound"] = number(e.tail_bound);
  j["status"] = std::string(to_string(e.status));
  j["R_used"] = number(e.R_used);
  if (e.terms_used <= Count(std::numeric_limits<std::int64_t>::max())) {
    j["terms_used"] = static_cast<std::int64_t>(e.terms_used);
  } else {
    j["terms_used"] = to_decimal(e.terms_used);  // beyond 64 bits: exact decimal string
  }
  if (e.certificate) {
    const auto& c = *e.certificate;
    Json cj;
    cj["entropy"] = number(c.entropy);
    cj["rate_ln_inv_sigma1"] = number(c.rate);
    cj["gap"] = number(c.gap);
    cj["family"] = c.family;
    cj["largest_partial_sum"] = number(c.largest_partial);
    cj["radius_reached"] = number(c.radius_reached);
    j["certificate"] = cj;
  }
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

Json to_json(const ConvergenceVerdict& v) {
  Json j;
  j["verdict"] = std::string(to_string(v.verdict));
  j["entropy"] = number(v.entropy);
  if (!std::isnan(v.subrose_entropy)) j["subrose_entropy"] = number(v.subrose_entropy);
  j["ln_inv_sigma2"] = number(v.rate_upper);
  j["ln_inv_sigma1"] = number(v.rate_lower);
  j["margin"] = number(v.margin);
  j["basis"] = v.basis;
  return j;
}

Json to_json(const EntropyEstimate& e) {
  Json j;
  j["solver"] = number(e.h_solver);
  j["radius"] = number(e.radius_used);
  j["h_words"] = number(e.h_words);
  j["h_cyclic"] = number(e.h_cyclic);
  j["h_classes"] = number(e.h_classes);
  j["words"] = to_decimal(e.words);
  j["cyclic"] = to_decimal(e.cyclic);
  j["classes"] = to_decimal(e.classes);
  return j;
}

Json to_json(const PointEstimate& p) {
  Json j;
  j["lengths"] = numbers(p.lengths);
  j["entropy"] = number(p.entropy);
  j["classification"] = to_json(p.verdict);
  j["estimate"] = to_json(p.estimate);
  return j;
}

Json to_json(const NonConstancyReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = r.series == "C" ? "theoremA_conj" : "theoremA_prim";
  j["series"] = r.series;
  j["rank"] = r.rank;
  j["weight"] = r.weight;
  j["sigma"] = number(r.sigma);
  j["hypothesis_bound"] = number(r.hypothesis_bound);
  j["target_tail"] = number(r.target_tail);
  j["boundary_t"] = number(r.boundary_t);
  j["point_finite"] = to_json(r.point_finite);
  j["point_divergent"] = to_json(r.point_divergent);
  if (r.dominating_C) j["dominating_C"] = to_json(*r.dominating_C);
  if (!r.count_checks.empty()) {
    Json arr = Json::array();
    for (const auto& c : r.count_checks) {
      Json cj;
      cj["R"] = number(c.radius);
      cj["p_family"] = c.family_count;
      cj["p_verified_primitive"] = c.verified_primitive;
      cj["b_subrose"] = c.subrose_ball;
      cj["holds"] = c.holds;
      arr.push_back(cj);
    }
    j["count_checks"] = arr;
    j["count_inequality_holds"] = r.count_inequality_holds;
  }
  j["partial_ratio"] = number(r.partial_ratio);
  j["separated"] = r.separated;
  j["separation"] = r.separation;
  return j;
}

Json to_json(const ConvexityReport& r) {
  Json j;
  j["series"] = r.series;
  j["rank"] = r.rank;
  j["weight"] = r.weight;
  j["step"] = number(r.step);
  j["target_tail"] = number(r.target_tail);
  j["grid"] = numbers(r.grid);
  j["values"] = numbers(r.values);
  j["tails"] = numbers(r.tails);
  j["statuses"] = r.statuses;
  j["second_differences"] = numbers(r.second_differences);
  j["required_margins"] = numbers(r.required_margins);
  j["all_converged"] = r.all_converged;
  j["all_positive"] = r.all_positive;
  j["argmin"] = number(r.argmin);
  j["symmetry_defect"] = number(r.symmetry_defect);
  return j;
}

Json to_json(const TheoremCReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = "theoremC";
  j["rank"] = r.rank;
  j["weight"] = r.weight;
  j["seed"] = r.seed;
  j["half_points"] = r.half_points;
  j["target_tail"] = number(r.target_tail);
  j["radius_candidates"] = numbers(r.radius_candidates);
  Json segs = Json::array();
  for (const auto& s : r.segments) {
    Json sj;
    sj["direction"] = numbers(s.direction);
    sj["radius"] = number(s.radius);
    sj["C"] = to_json(s.C);
    sj["P"] = to_json(s.P);
    sj["coordinate_second_differences"] = numbers(s.coordinate_second_differences);
    sj["coordinate_convex"] = s.coordinate_convex;
    Json dec = Json::array();
    for (const auto& d : s.decomposition) {
      Json dj;
      dj["s"] = number(d.s);
      dj["R"] = number(d.radius);
      dj["census_sum"] = number(d.census_sum);
      dj["enumerated_sum"] = number(d.enumerated_sum);
      dj["difference"] = number(d.difference);
      dj["ok"] = d.ok;
      dec.push_back(dj);
    }
    sj["decomposition"] = dec;
    sj["decomposition_ok"] = s.decomposition_ok;
    segs.push_back(sj);
  }
  j["segments"] = segs;
  j["all_positive_C"] = r.all_positive_C;
  j["all_positive_P"] = r.all_positive_P;
  j["coordinate_convex"] = r.coordinate_convex;
  j["decomposition_ok"] = r.decomposition_ok;
  j["inconclusive"] = r.inconclusive;
  return j;
}

Json to_json(const BlowupTable& t) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = "blowup";
  j["rank"] = t.rank;
  j["barycenter_entropy"] = number(t.barycenter_entropy);
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(Json{{"t", number(r.t)}, {"entropy", number(r.entropy)}});
  j["rows"] = rows;
  j["strictly_decreasing"] = t.strictly_decreasing;
  return j;
}

std::string to_csv(const ConvexityReport& r) {
  std::ostringstream os;
  os << "param,value,tail,status\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    os << format12(r.grid[i]) << ',' << format12(r.values[i]) << ',' << format12(r.tails[i]) << ','
       << r.statuses[i] << '\n';
  return os.str();
}

std::string to_csv(const TheoremCReport& r) {
  std::ostringstream os;
  os << "segment,series,s,value,tail,status\n";
  for (std::size_t k = 0; k < r.segments.size(); ++k)
    for (const ConvexityReport* c : {&r.segments[k].C, &r.segments[k].P})
      for (std::size_t i = 0; i < c->grid.size(); ++i)
        os << k << ',' << c->series << ',' << format12(c->grid[i]) << ',' << format12(c->values[i]) << ','
           << format12(c->tails[i]) << ',' << c->statuses[i] << '\n';
  return os.str();
}

std::string to_csv(const BlowupTable& t) {
  std::ostringstream os;
  os << "t,entropy\n";
  for (const auto& r : t.rows) os << format12(r.t) << ',' << format12(r.entropy) << '\n';
  return os.str();
}

}  // namespace rosesum
