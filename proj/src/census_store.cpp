#include "rosesum/census_store.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>

#include <json.hpp>

#include "rosesum/errors.hpp"
#include "rosesum/whitehead.hpp"

namespace rosesum {

namespace {

nlohmann::json counts_to_json(std::span<const Count> counts) {
  auto arr = nlohmann::json::array();
  for (const Count& c : counts) arr.push_back(to_decimal(c));
  return arr;
}

std::vector<Count> counts_from_json(const nlohmann::json& arr, std::size_t expected, const std::string& what) {
  if (!arr.is_array() || arr.size() != expected)
    throw CacheError("cache entry '" + what + "' has the wrong length");
  std::vector<Count> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_string()) throw CacheError("cache entry '" + what + "' holds a non-string count");
    try {
      out.emplace_back(v.get<std::string>());
    } catch (const std::exception&) {
      throw CacheError("cache entry '" + what + "' holds a malformed count");
    }
  }
  return out;
}

}  // namespace

std::string census_file_name(int rank, ClassKind kind, int max_total) {
  return "census_k" + std::to_string(rank) + "_" + std::string(to_string(kind)) + "_n" + std::to_string(max_total) +
         ".json";
}

void save_census(const CensusTable& table, const std::filesystem::path& file) {
  nlohmann::ordered_json j;
  j["format"] = kCacheFormat;
  j["version"] = kCacheVersion;
  j["rank"] = table.rank();
  j["kind"] = std::string(to_string(table.kind()));
  j["max_total"] = table.max_total();
  j["classes"] = counts_to_json(table.classes());
  if (table.has_word_counts()) {
    j["reduced"] = counts_to_json(table.reduced_words());
    j["cyclic"] = counts_to_json(table.cyclic_words());
  }
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw CacheError("cannot write cache file " + tmp.string());
    out << j.dump();
    if (!out) throw CacheError("failed writing cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

CensusTable load_census(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CacheError("cannot open cache file " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CacheError("cache file " + file.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kCacheFormat)
    throw CacheError("cache file " + file.string() + " lacks the census format stamp");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kCacheVersion)
    throw CacheError("cache file " + file.string() + " has an unsupported version stamp");
  int rank = 0, max_total = 0;
  ClassKind kind{};
  try {
    rank = j.at("rank").get<int>();
    max_total = j.at("max_total").get<int>();
    kind = parse_class_kind(j.at("kind").get<std::string>());
  } catch (const std::exception& e) {
    throw CacheError("cache file " + file.string() + " has a malformed header: " + e.what());
  }
  std::shared_ptr<const OccurrenceIndex> index;
  try {
    index = std::make_shared<const OccurrenceIndex>(rank, max_total);
  } catch (const std::exception& e) {
    throw CacheError("cache file " + file.string() + " has an invalid shape: " + e.what());
  }
  const std::size_t n = index->size();
  auto classes = counts_from_json(j.value("classes", nlohmann::json()), n, "classes");
  std::vector<Count> reduced, cyclic;
  if (j.contains("reduced")) {
    reduced = counts_from_json(j["reduced"], n, "reduced");
    cyclic = counts_from_json(j.value("cyclic", nlohmann::json()), n, "cyclic");
  }
  return CensusTable(std::move(index), kind, std::move(classes), std::move(reduced), std::move(cyclic));
}

CensusStore::CensusStore(std::optional<std::filesystem::path> directory, unsigned threads)
    : directory_(std::move(directory)), threads_(threads) {
  if (directory_) std::filesystem::create_directories(*directory_);
}

std::optional<std::filesystem::path> CensusStore::directory_from_env() {
  const char* v = std::getenv(kCacheEnvVar);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

std::shared_ptr<const CensusTable> CensusStore::from_disk(int rank, ClassKind kind, int min_total) const {
  if (!directory_) return nullptr;
  const std::regex pattern("census_k" + std::to_string(rank) + "_" + std::string(to_string(kind)) +
                           "_n([0-9]+)\\.json");
  std::optional<std::pair<int, std::filesystem::path>> best;
  for (const auto& entry : std::filesystem::directory_iterator(*directory_)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, pattern)) continue;
    const int n = std::stoi(m[1].str());
    if (n >= min_total && (!best || n < best->first)) best.emplace(n, entry.path());
  }
  if (!best) return nullptr;
  auto table = std::make_shared<const CensusTable>(load_census(best->second));
  if (table->rank() != rank || table->kind() != kind || table->max_total() != best->first)
    throw CacheError("cache file " + best->second.string() + " does not match its name");
  return table;
}

std::shared_ptr<const CensusTable> CensusStore::get(int rank, ClassKind kind, int min_total) {
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(rank, kind);
  if (auto it = tables_.find(key); it != tables_.end() && it->second->max_total() >= min_total) return it->second;
  std::shared_ptr<const CensusTable> table = from_disk(rank, kind, min_total);
  if (!table) {
    if (kind == ClassKind::primitive) {
      if (rank != 2) throw DomainError("primitive censuses are exact only at rank 2");
      table = std::make_shared<const CensusTable>(primitive_census_F2(min_total));
    } else {
      table = std::make_shared<const CensusTable>(occurrence_census(rank, min_total, kind, threads_));
    }
    if (directory_) save_census(*table, *directory_ / census_file_name(rank, kind, table->max_total()));
  }
  tables_[key] = table;
  return table;
}

std::shared_ptr<const std::set<CyclicWord>> CensusStore::primitives(int rank, int max_length) {
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(rank, max_length);
  if (auto it = primitives_.find(key); it != primitives_.end()) return it->second;
  auto set = std::make_shared<const std::set<CyclicWord>>(whitehead_primitives_upto(rank, max_length));
  primitives_[key] = set;
  return set;
}

}  // namespace rosesum
