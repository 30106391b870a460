#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "rosesum/census.hpp"

namespace rosesum {

inline constexpr const char* kCacheFormat = "rosesum-census";
inline constexpr int kCacheVersion = 1;
inline constexpr const char* kCacheEnvVar = "ROSESUM_CACHE_DIR";

void save_census(const CensusTable& table, const std::filesystem::path& file);
/// Throws CacheError on a missing stamp, a version mismatch or inconsistent data.
CensusTable load_census(const std::filesystem::path& file);
std::string census_file_name(int rank, ClassKind kind, int max_total);

/// Memoizes censuses in memory and, when a directory is configured, on disk
/// as JSON. A request is served by any stored table of at least the asked
/// size. Thread-safe.
class CensusStore {
 public:
  explicit CensusStore(std::optional<std::filesystem::path> directory = std::nullopt, unsigned threads = 0);

  /// Directory from the environment override, if set and non-empty.
  static std::optional<std::filesystem::path> directory_from_env();

  const std::optional<std::filesystem::path>& directory() const noexcept { return directory_; }
  unsigned threads() const noexcept { return threads_; }

  /// Kinds all | rootfree for every rank; primitive only for rank 2.
  std::shared_ptr<const CensusTable> get(int rank, ClassKind kind, int min_total);

  /// Whitehead-closure primitives, memoized in memory only.
  std::shared_ptr<const std::set<CyclicWord>> primitives(int rank, int max_length);

 private:
  std::shared_ptr<const CensusTable> from_disk(int rank, ClassKind kind, int min_total) const;

  std::optional<std::filesystem::path> directory_;
  unsigned threads_;
  std::mutex mutex_;
  std::map<std::pair<int, ClassKind>, std::shared_ptr<const CensusTable>> tables_;
  std::map<std::pair<int, int>, std::shared_ptr<const std::set<CyclicWord>>> primitives_;
};

}  // namespace rosesum
