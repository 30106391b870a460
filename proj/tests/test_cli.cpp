#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rosesum/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rosesum");
  std::ostringstream out, err;
  const int code = rosesum::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cli entropy") {
  auto r = run({"entropy", "--barycenter", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "2.19722457734\n");
  r = run({"entropy", "--lengths", "0.3,0.7", "--method", "spectral"});
  CHECK(r.code == 0);
  r = run({"entropy", "--lengths", "0.3,-0.7"});
  CHECK(r.code == 1);
  r = run({"entropy", "--lengths", "0.3,0.6", "--simplex"});
  CHECK(r.code == 1);
}

TEST_CASE("cli usage errors") {
  CHECK(run({"entropy", "--bogus"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"sum", "--kind", "C", "--barycenter", "2"}).code == 1);  // no weight
  CHECK(run({"sum", "--kind", "C", "--barycenter", "2", "--weight", "exp:2"}).code == 1);
}

TEST_CASE("cli sums") {
  auto r = run({"sum", "--kind", "P", "--lengths", "0.5,0.5", "--weight", "mcshane", "--tail", "1e-8"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "converged");
  CHECK(j["tail_bound"].get<double>() <= 1e-8);
  for (const char* key : {"value", "tail_bound", "status", "R_used", "terms_used"}) CHECK(j.contains(key));

  r = run({"sum", "--kind", "C", "--lengths", "0.05,0.95", "--weight", "exp:0.05"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["status"] == "divergence_certified");

  r = run({"sum", "--kind", "C", "--barycenter", "2", "--weight", "exp:0.05", "--tail", "1e-30", "--max-letters", "10"});
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.out)["status"] == "inconclusive");

  r = run({"sum", "--kind", "C", "--barycenter", "2", "--weight", "pow:4"});
  CHECK(r.code == 3);
}

TEST_CASE("cli experiments exit codes") {
  CHECK(run({"experiment", "--name", "theoremA", "--rank", "2", "--sigma", "0.2"}).code == 2);
  auto r = run({"experiment", "--name", "blowup", "--rank", "2", "--t-grid", "0.1,0.3,0.5"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["strictly_decreasing"] == true);
}

TEST_CASE("cli counting") {
  auto r = run({"census", "--rank", "2", "--max-total", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1,0,2,") != std::string::npos);
  CHECK(r.out.find("1,1,4,") != std::string::npos);
  r = run({"count", "--rank", "2", "--max-length", "6", "--method", "enumerate"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  for (const auto& row : j["lengths"]) CHECK(row["reduced"] == row["formula"]);
  r = run({"primitives", "--rank", "2", "--max-length", "6", "--check"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["check"]["equal"] == true);
}

TEST_CASE("cli cache is reproducible and guarded") {
  const auto dir = std::filesystem::temp_directory_path() / "rosesum_cli_cache";
  std::filesystem::remove_all(dir);
  const std::vector<std::string> args = {"sum", "--kind", "C", "--lengths", "0.3,0.7", "--weight", "exp:0.05",
                                         "--tail", "1e-6", "--cache-dir", dir.string()};
  auto a = run(args);
  auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  bool any = false;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    any = true;
    std::ofstream(entry.path()) << R"({"format":"rosesum-census","version":99})";
  }
  CHECK(any);
  auto c = run(args);
  CHECK(c.code == 1);
  CHECK(c.err.find("cache") != std::string::npos);
  std::filesystem::remove_all(dir);
}
