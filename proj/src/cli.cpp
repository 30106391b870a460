#include "rosesum/cli.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "rosesum/census.hpp"
#include "rosesum/census_store.hpp"
#include "rosesum/errors.hpp"
#include "rosesum/experiments.hpp"
#include "rosesum/report_json.hpp"
#include "rosesum/sums.hpp"
#include "rosesum/whitehead.hpp"

namespace rosesum::cli {

namespace {

struct RunConfig {
  int rank = 0;
  std::vector<double> lengths;
  int barycenter = 0;
  bool simplex = false;
  std::string weight;
  double tail = 1e-8;
  int max_letters = 0;
  long max_box = 4000;
  int oracle_length = 0;
  double time_cap = 0.0;
  std::string cache_dir;
  std::string format = "json";
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

MetricStructure metric_from(const RunConfig& c) {
  if (c.barycenter > 0 && !c.lengths.empty()) throw DomainError("give either --lengths or --barycenter, not both");
  if (c.barycenter > 0) return barycenter(c.barycenter);
  if (c.lengths.empty()) throw DomainError("a metric needs --lengths or --barycenter");
  MetricStructure m = c.simplex ? MetricStructure::on_simplex(c.lengths) : MetricStructure(c.lengths);
  if (c.rank != 0 && c.rank != m.rank()) throw DomainError("--rank does not match the number of lengths");
  return m;
}

SumBudget budget_from(const RunConfig& c) {
  if (c.max_letters < 0 || c.max_box < 1 || c.oracle_length < 0) throw DomainError("budgets must be positive");
  SumBudget b;
  b.max_letters = c.max_letters;
  b.max_box = c.max_box;
  b.oracle_length = c.oracle_length;
  b.threads = c.threads;
  return b;
}

CensusStore make_store(const RunConfig& c) {
  std::optional<std::filesystem::path> dir;
  if (!c.cache_dir.empty()) {
    dir = std::filesystem::path(c.cache_dir);
  } else {
    dir = CensusStore::directory_from_env();
  }
  return CensusStore(dir, c.threads);
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_csv(const std::string& path, const std::string& csv) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write CSV file " + path);
  f << csv;
}

void add_metric_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--lengths", c.lengths, "petal lengths, comma separated")->delimiter(',');
  sub->add_option("--barycenter", c.barycenter, "use the barycenter of rank k")->check(CLI::Range(2, 26));
  sub->add_flag("--simplex", c.simplex, "require the lengths to sum to 1 within 1e-12");
}

void add_common_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--threads", c.threads, "worker threads (default: available parallelism)");
  sub->add_option("--cache-dir", c.cache_dir, "census cache directory (overrides ROSESUM_CACHE_DIR)");
  sub->add_option("--time-cap", c.time_cap, "wall-clock cap in seconds; exceeding it exits with status 3")
      ->check(CLI::NonNegativeNumber);
}

int exit_for(SumStatus s) { return s == SumStatus::inconclusive ? kExitBudget : kExitOk; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"McShane-type sums over metric roses"};
  app.name(args.empty() ? "rosesum" : args.front());
  app.require_subcommand(1);
  RunConfig cfg;

  auto* entropy_cmd = app.add_subcommand("entropy", "volume entropy of a metric rose");
  add_metric_options(entropy_cmd, cfg);
  add_common_options(entropy_cmd, cfg);
  std::string method = "scalar";
  double empirical = 0.0;
  std::string entropy_format = "text";
  entropy_cmd->add_option("--method", method, "scalar | spectral")->check(CLI::IsMember({"scalar", "spectral"}));
  entropy_cmd->add_option("--empirical", empirical, "also count words, cyclic words and classes up to radius R");
  entropy_cmd->add_option("--format", entropy_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto* count_cmd = app.add_subcommand("count", "counts of reduced words and classes by word length");
  int max_length = 8;
  std::string count_method = "dp";
  count_cmd->add_option("--rank", cfg.rank, "rank k")->required()->check(CLI::Range(1, 5));
  count_cmd->add_option("--max-length", max_length, "largest word length")->check(CLI::Range(1, 4095));
  count_cmd->add_option("--method", count_method, "dp | enumerate")->check(CLI::IsMember({"dp", "enumerate"}));
  add_common_options(count_cmd, cfg);

  auto* census_cmd = app.add_subcommand("census", "class counts q_m by occurrence vector");
  int max_total = 6;
  std::string kind_text = "all";
  double radius = -1.0;
  census_cmd->add_option("--rank", cfg.rank, "rank k")->required()->check(CLI::Range(1, 5));
  census_cmd->add_option("--max-total", max_total, "largest |m|")->check(CLI::Range(1, 4095));
  census_cmd->add_option("--kind", kind_text, "all | rootfree | primitive")
      ->check(CLI::IsMember({"all", "rootfree", "primitive"}));
  census_cmd->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  census_cmd->add_option("--radius", radius, "with --lengths: also total the counts within this radius");
  census_cmd->add_option("--lengths", cfg.lengths, "petal lengths for --radius")->delimiter(',');
  add_common_options(census_cmd, cfg);

  auto* sum_cmd = app.add_subcommand("sum", "certified estimate of C_f, P_f or S_f");
  std::string series = "C";
  double fixed_radius = -1.0;
  sum_cmd->add_option("--kind", series, "C | P | S")->check(CLI::IsMember({"C", "P", "S"}));
  add_metric_options(sum_cmd, cfg);
  sum_cmd->add_option("--weight", cfg.weight, "exp:<sigma> | mcshane | pow:<p>")->required();
  sum_cmd->add_option("--tail", cfg.tail, "target tail bound")->check(CLI::PositiveNumber);
  sum_cmd->add_option("--radius", fixed_radius, "sum at this fixed radius (box size for P at rank 2)");
  sum_cmd->add_option("--max-letters", cfg.max_letters, "word-length budget of the census");
  sum_cmd->add_option("--max-box", cfg.max_box, "visible-point box budget for P at rank 2");
  sum_cmd->add_option("--oracle-length", cfg.oracle_length, "Whitehead oracle length for P at rank >= 3");
  add_common_options(sum_cmd, cfg);

  auto* prim_cmd = app.add_subcommand("primitives", "primitive classes from the Whitehead closure");
  int prim_length = 6;
  bool prim_check = false;
  prim_cmd->add_option("--rank", cfg.rank, "rank k")->required()->check(CLI::Range(2, 5));
  prim_cmd->add_option("--max-length", prim_length, "largest cyclic length")->check(CLI::Range(1, 64));
  prim_cmd->add_flag("--check", prim_check, "rank 2: compare with the images of the visible points");
  add_common_options(prim_cmd, cfg);

  auto* exp_cmd = app.add_subcommand("experiment", "theorem-reproduction drivers");
  std::string exp_name;
  double sigma = 0.0;
  double step = 0.05;
  int directions = 3;
  double t_param = 0.05;
  std::vector<double> t_grid;
  std::string csv_path;
  double exp_tail = 0.0;
  exp_cmd->add_option("--name", exp_name, "theoremA | theoremAprim | theoremB | theoremC | blowup")
      ->required()
      ->check(CLI::IsMember({"theoremA", "theoremAprim", "theoremB", "theoremC", "blowup"}));
  exp_cmd->add_option("--rank", cfg.rank, "rank k")->check(CLI::Range(2, 5));
  exp_cmd->add_option("--sigma", sigma, "exponential weight sigma^x (theoremA, theoremAprim)");
  exp_cmd->add_option("--weight", cfg.weight, "weight (theoremB, theoremC)");
  exp_cmd->add_option("--step", step, "grid step (theoremB)");
  exp_cmd->add_option("--directions", directions, "number of seeded directions (theoremC)")
      ->check(CLI::NonNegativeNumber);
  exp_cmd->add_option("--seed", cfg.seed, "seed for the directions (theoremC)");
  exp_cmd->add_option("--t", t_param, "boundary parameter (theoremAprim)");
  exp_cmd->add_option("--t-grid", t_grid, "t values (blowup)")->delimiter(',');
  exp_cmd->add_option("--tail", exp_tail, "per-point tail target")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--max-letters", cfg.max_letters, "word-length budget of the census");
  exp_cmd->add_option("--max-box", cfg.max_box, "visible-point box budget");
  exp_cmd->add_option("--csv", csv_path, "also write the grid as CSV to this file");
  add_common_options(exp_cmd, cfg);

  try {
    // CLI11 consumes the arguments in reverse order; drop the program name
    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  auto body = [&](std::ostream& o) -> int {
    CensusStore store = make_store(cfg);

    if (entropy_cmd->parsed()) {
      const MetricStructure m = metric_from(cfg);
      const double h = method == "spectral" ? entropy_spectral(m.lengths()) : entropy(m);
      if (empirical > 0.0) {
        const int n = static_cast<int>(std::floor(empirical / m.min_length())) + 1;
        const auto census = store.get(m.rank(), ClassKind::all, n);
        Json j = to_json(empirical_entropy(m, empirical, *census));
        j["solver"] = number(h);
        j["method"] = method;
        emit(o, j);
      } else if (entropy_format == "json") {
        Json j;
        j["lengths"] = numbers(std::vector<double>(m.lengths().begin(), m.lengths().end()));
        j["entropy"] = number(h);
        j["method"] = method;
        emit(o, j);
      } else {
        o << format12(h) << '\n';
      }
      return kExitOk;
    }

    if (count_cmd->parsed()) {
      Json j;
      j["rank"] = cfg.rank;
      j["method"] = count_method;
      Json rows = Json::array();
      if (count_method == "dp") {
        const auto all = store.get(cfg.rank, ClassKind::all, max_length);
        const auto rf = store.get(cfg.rank, ClassKind::rootfree, max_length);
        for (int n = 1; n <= max_length; ++n)
          rows.push_back(Json{{"n", n},
                              {"reduced", to_decimal(all->reduced_of_length(n))},
                              {"formula", to_decimal(word_count_formula_check(cfg.rank, n))},
                              {"cyclic", to_decimal(all->cyclic_of_length(n))},
                              {"classes", to_decimal(all->classes_of_length(n))},
                              {"rootfree", to_decimal(rf->classes_of_length(n))}});
      } else {
        const auto w = enumerate_word_counts(cfg.rank, max_length, cfg.threads);
        for (int n = 1; n <= max_length; ++n) {
          const auto i = static_cast<std::size_t>(n);
          rows.push_back(Json{{"n", n},
                              {"reduced", to_decimal(w.reduced[i])},
                              {"formula", to_decimal(word_count_formula_check(cfg.rank, n))},
                              {"cyclic", to_decimal(w.cyclic[i])},
                              {"classes", to_decimal(w.classes[i])},
                              {"rootfree", to_decimal(w.rootfree[i])}});
        }
      }
      j["lengths"] = rows;
      emit(o, j);
      return kExitOk;
    }

    if (census_cmd->parsed()) {
      const ClassKind kind = parse_class_kind(kind_text);
      const auto table = store.get(cfg.rank, kind, max_total);
      const auto& index = table->index();
      std::size_t end = index.layer_end(max_total);
      if (cfg.format == "csv") {
        for (int i = 1; i <= cfg.rank; ++i) o << 'm' << i << ',';
        o << "q" << (table->has_word_counts() ? ",reduced,cyclic" : "") << '\n';
        for (std::size_t i = 0; i < end; ++i) {
          for (int v : index.vector(i)) o << v << ',';
          o << to_decimal(table->classes()[i]);
          if (table->has_word_counts())
            o << ',' << to_decimal(table->reduced_words()[i]) << ',' << to_decimal(table->cyclic_words()[i]);
          o << '\n';
        }
        return kExitOk;
      }
      Json j;
      j["rank"] = cfg.rank;
      j["kind"] = kind_text;
      j["max_total"] = max_total;
      Json entries = Json::array();
      for (std::size_t i = 0; i < end; ++i) {
        Json e;
        const auto v = index.vector(i);
        e["m"] = std::vector<int>(v.begin(), v.end());
        e["q"] = to_decimal(table->classes()[i]);
        if (table->has_word_counts()) {
          e["reduced"] = to_decimal(table->reduced_words()[i]);
          e["cyclic"] = to_decimal(table->cyclic_words()[i]);
        }
        entries.push_back(e);
      }
      j["entries"] = entries;
      if (radius >= 0.0) {
        const MetricStructure m(cfg.lengths);
        if (m.rank() != cfg.rank) throw DomainError("--lengths does not match --rank");
        if (table->covered_radius(m) < radius)
          throw InsufficientData("census of total " + std::to_string(max_total) + " does not cover radius " +
                                 format12(radius));
        Json w;
        w["radius"] = number(radius);
        w["classes"] = to_decimal(table->classes_within(m, radius));
        if (table->has_word_counts()) {
          w["reduced"] = to_decimal(table->reduced_within(m, radius));
          w["cyclic"] = to_decimal(table->cyclic_within(m, radius));
        }
        j["within"] = w;
      }
      emit(o, j);
      return kExitOk;
    }

    if (sum_cmd->parsed()) {
      const MetricStructure m = metric_from(cfg);
      const WeightFunction f = parse_weight(cfg.weight);
      const SeriesKind kind = parse_series_kind(series);
      const SumBudget budget = budget_from(cfg);
      const SumEstimate e = fixed_radius >= 0.0 ? estimate_at(kind, m, f, fixed_radius, budget, &store)
                                                : estimate(kind, m, f, cfg.tail, budget, &store);
      Json j = to_json(e);
      j["kind"] = series;
      j["weight"] = f.descriptor();
      j["lengths"] = numbers(std::vector<double>(m.lengths().begin(), m.lengths().end()));
      j["classification"] = to_json(classify_convergence(kind, m, f));
      emit(o, j);
      return exit_for(e.status);
    }

    if (prim_cmd->parsed()) {
      const auto prims = store.primitives(cfg.rank, prim_length);
      Json j;
      j["rank"] = cfg.rank;
      j["max_length"] = prim_length;
      j["count"] = prims->size();
      Json list = Json::array();
      for (const auto& c : *prims) list.push_back(c.to_string());
      j["classes"] = list;
      if (prim_check) {
        if (cfg.rank != 2) throw DomainError("--check compares with visible points and needs rank 2");
        std::set<CyclicWord> visible;
        for (const auto& [p, q] : visible_points_upto(prim_length).points)
          if (std::labs(p) + std::labs(q) <= prim_length) visible.insert(primitive_rep_from_visible(p, q));
        Json missing_oracle = Json::array(), missing_visible = Json::array();
        for (const auto& c : visible)
          if (!prims->count(c)) missing_oracle.push_back(c.to_string());
        for (const auto& c : *prims)
          if (!visible.count(c)) missing_visible.push_back(c.to_string());
        j["check"] = Json{{"visible_count", visible.size()},
                          {"missing_from_oracle", missing_oracle},
                          {"missing_from_visible", missing_visible},
                          {"equal", missing_oracle.empty() && missing_visible.empty()}};
      }
      emit(o, j);
      return kExitOk;
    }

    // experiment
    const SumBudget budget = budget_from(cfg);
    if (exp_name == "theoremA") {
      const int k = cfg.rank ? cfg.rank : 2;
      TheoremAOptions opt;
      opt.budget = budget;
      if (exp_tail > 0.0) opt.target_tail = exp_tail;
      const auto r = theoremA_conj(k, sigma > 0.0 ? sigma : (k == 2 ? 0.05 : 0.005), opt, &store);
      emit(o, to_json(r));
      return r.separated ? kExitOk : kExitBudget;
    }
    if (exp_name == "theoremAprim") {
      const int k = cfg.rank ? cfg.rank : 3;
      TheoremAPrimOptions opt;
      opt.budget = budget;
      opt.t = t_param;
      if (exp_tail > 0.0) opt.target_tail = exp_tail;
      const auto r = theoremA_prim(k, sigma > 0.0 ? sigma : 0.005, opt, &store);
      emit(o, to_json(r));
      return r.separated ? kExitOk : kExitBudget;
    }
    if (exp_name == "theoremB") {
      TheoremBOptions opt;
      opt.max_box = cfg.max_box;
      if (exp_tail > 0.0) opt.target_tail = exp_tail;
      const auto r = theoremB_scan(parse_weight(cfg.weight.empty() ? "mcshane" : cfg.weight), step, opt, &store);
      Json j;
      j["schema_version"] = kReportSchemaVersion;
      j["experiment"] = "theoremB";
      j["scan"] = to_json(r);
      const auto mid = std::find_if(r.grid.begin(), r.grid.end(), [](double t) { return std::abs(t - 0.5) < 1e-12; });
      if (mid != r.grid.end()) {
        const auto i = static_cast<std::size_t>(mid - r.grid.begin());
        j["value_at_half"] = number(r.values[i]);
        j["tail_at_half"] = number(r.tails[i]);
      }
      emit(o, j);
      write_csv(csv_path, to_csv(r));
      return r.all_converged ? kExitOk : kExitBudget;
    }
    if (exp_name == "theoremC") {
      const int k = cfg.rank ? cfg.rank : 2;
      TheoremCOptions opt;
      opt.directions = directions;
      opt.seed = cfg.seed;
      opt.budget = budget;
      if (exp_tail > 0.0) opt.target_tail = exp_tail;
      const std::string w = cfg.weight.empty() ? (k == 2 ? "exp:0.05" : "exp:0.001") : cfg.weight;
      const auto r = theoremC_scan(k, parse_weight(w), opt, &store);
      emit(o, to_json(r));
      write_csv(csv_path, to_csv(r));
      return r.inconclusive ? kExitBudget : kExitOk;
    }
    const int k = cfg.rank ? cfg.rank : 2;
    if (t_grid.empty())
      for (int i = 1; i <= 9; ++i) t_grid.push_back(i / (10.0 * (k - 1)));
    const auto r = entropy_blowup_curve(k, t_grid);
    emit(o, to_json(r));
    write_csv(csv_path, to_csv(r));
    return kExitOk;
  };

  auto guarded = [&](std::ostream& o) -> int {
    try {
      return body(o);
    } catch (const HypothesisViolation& e) {
      err << "hypothesis violation: " << e.what() << '\n';
      return kExitHypothesis;
    } catch (const BudgetExceeded& e) {
      err << "budget exceeded: " << e.what() << '\n';
      return kExitBudget;
    } catch (const InsufficientData& e) {
      err << "insufficient data: " << e.what() << '\n';
      return kExitBudget;
    } catch (const NoCertificate& e) {
      err << e.what() << '\n';
      return kExitBudget;
    } catch (const CacheError& e) {
      err << "cache error: " << e.what() << '\n';
      return kExitInput;
    } catch (const std::invalid_argument& e) {
      err << "input error: " << e.what() << '\n';
      return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
      err << "input error: " << e.what() << '\n';
      return kExitInput;
    }
  };

  if (cfg.time_cap <= 0.0) return guarded(out);
  // The report is buffered so a run cut off by the cap prints nothing partial.
  auto buffer = std::make_shared<std::ostringstream>();
  auto task = std::make_shared<std::packaged_task<int()>>([&guarded, buffer] { return guarded(*buffer); });
  auto result = task->get_future();
  std::thread(std::move(*task)).detach();
  if (result.wait_for(std::chrono::duration<double>(cfg.time_cap)) != std::future_status::ready) {
    err << "budget exceeded: time cap of " << format12(cfg.time_cap) << " s reached\n";
    out.flush();
    err.flush();
    std::_Exit(kExitBudget);
  }
  out << buffer->str();
  return result.get();
}

}  // namespace rosesum::cli
