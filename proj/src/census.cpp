#include "rosesum/census.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "rosesum/errors.hpp"

namespace rosesum {

namespace {

constexpr int kPackBits = 12;
constexpr int kMaxCensusRank = 5;
constexpr int kMaxCensusTotal = (1 << kPackBits) - 1;

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

int mobius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

int gcd_of(std::span<const int> m) {
  int g = 0;
  for (int x : m) g = std::gcd(g, x);
  return g;
}

std::vector<int> divided(std::span<const int> m, int d) {
  std::vector<int> out(m.begin(), m.end());
  for (int& x : out) x /= d;
  return out;
}

void check_census_args(int rank, int max_total) {
  if (rank < 1 || rank > kMaxCensusRank) throw DomainError("census supports ranks 1..5");
  if (max_total < 1) throw DomainError("census max_total must be at least 1");
  if (max_total > kMaxCensusTotal) throw DomainError("census max_total exceeds 4095");
}

}  // namespace

std::string_view to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::all:
      return "all";
    case ClassKind::rootfree:
      return "rootfree";
    case ClassKind::primitive:
      return "primitive";
  }
  return "all";
}

ClassKind parse_class_kind(std::string_view text) {
  if (text == "all") return ClassKind::all;
  if (text == "rootfree") return ClassKind::rootfree;
  if (text == "primitive") return ClassKind::primitive;
  throw DomainError("unknown class kind '" + std::string(text) + "'");
}

std::uint64_t OccurrenceIndex::pack(std::span<const int> m) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < m.size(); ++i) key |= static_cast<std::uint64_t>(m[i]) << (kPackBits * i);
  return key;
}

OccurrenceIndex::OccurrenceIndex(int rank, int max_total) : rank_(rank), max_total_(max_total) {
  check_census_args(rank, max_total);
  const auto k = static_cast<std::size_t>(rank);
  layer_offsets_.push_back(0);
  std::vector<int> m(k, 0);
  for (int n = 1; n <= max_total; ++n) {
    // compositions of n into k parts, lexicographically increasing
    std::fill(m.begin(), m.end(), 0);
    m[k - 1] = n;
    while (true) {
      lookup_.emplace(pack(m), totals_.size());
      coords_.insert(coords_.end(), m.begin(), m.end());
      totals_.push_back(n);
      // next composition: find rightmost position i < k-1 that can take one
      // unit from the tail
      std::size_t i = k - 1;
      while (i > 0 && m[i] == 0) --i;
      if (i == 0) break;
      const int tail = m[i];
      m[i] = 0;
      m[i - 1] += 1;
      m[k - 1] = tail - 1;
    }
    layer_offsets_.push_back(totals_.size());
  }
  successors_.assign(totals_.size() * k, static_cast<std::size_t>(-1));
  std::vector<int> next(k);
  for (std::size_t idx = 0; idx < totals_.size(); ++idx) {
    if (totals_[idx] >= max_total) break;
    const auto v = vector(idx);
    for (std::size_t g = 0; g < k; ++g) {
      std::copy(v.begin(), v.end(), next.begin());
      ++next[g];
      successors_[idx * k + g] = lookup_.at(pack(next));
    }
  }
}

std::optional<std::size_t> OccurrenceIndex::find(std::span<const int> m) const {
  if (static_cast<int>(m.size()) != rank_) return std::nullopt;
  int total = 0;
  for (int x : m) {
    if (x < 0) return std::nullopt;
    total += x;
  }
  if (total < 1 || total > max_total_) return std::nullopt;
  const auto it = lookup_.find(pack(m));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

CensusTable::CensusTable(std::shared_ptr<const OccurrenceIndex> index, ClassKind kind, std::vector<Count> classes,
                         std::vector<Count> reduced, std::vector<Count> cyclic)
    : index_(std::move(index)),
      kind_(kind),
      classes_(std::move(classes)),
      reduced_(std::move(reduced)),
      cyclic_(std::move(cyclic)) {
  if (classes_.size() != index_->size()) throw DomainError("census class counts do not match the index");
  if (!reduced_.empty() && reduced_.size() != index_->size())
    throw DomainError("census word counts do not match the index");
  if (reduced_.size() != cyclic_.size()) throw DomainError("census word count columns differ in size");
  classes_double_.reserve(classes_.size());
  for (const Count& c : classes_) classes_double_.push_back(to_double(c));
}

Count CensusTable::q(std::span<const int> m) const {
  int total = 0;
  for (int x : m) total += x;
  if (total > max_total()) throw InsufficientData("occurrence vector beyond the census range");
  const auto idx = index_->find(m);
  return idx ? classes_[*idx] : Count(0);
}

Count CensusTable::sum_layer(std::span<const Count> counts, int n) const {
  if (n < 1 || n > max_total()) throw InsufficientData("word length outside the census range");
  Count acc = 0;
  for (std::size_t i = index_->layer_begin(n); i < index_->layer_end(n); ++i) acc += counts[i];
  return acc;
}

Count CensusTable::classes_of_length(int n) const { return sum_layer(classes_, n); }

Count CensusTable::reduced_of_length(int n) const {
  if (!has_word_counts()) throw InsufficientData("census carries no word counts");
  return sum_layer(reduced_, n);
}

Count CensusTable::cyclic_of_length(int n) const {
  if (!has_word_counts()) throw InsufficientData("census carries no word counts");
  return sum_layer(cyclic_, n);
}

Count CensusTable::sum_within(std::span<const Count> counts, const MetricStructure& metric, double radius) const {
  if (metric.rank() != rank()) throw DomainError("census rank does not match the metric");
  Count acc = 0;
  for (std::size_t i = 0; i < index_->size(); ++i)
    if (class_length(metric, index_->vector(i)) <= radius) acc += counts[i];
  return acc;
}

Count CensusTable::classes_within(const MetricStructure& metric, double radius) const {
  return sum_within(classes_, metric, radius);
}

Count CensusTable::reduced_within(const MetricStructure& metric, double radius) const {
  if (!has_word_counts()) throw InsufficientData("census carries no word counts");
  return sum_within(reduced_, metric, radius);
}

Count CensusTable::cyclic_within(const MetricStructure& metric, double radius) const {
  if (!has_word_counts()) throw InsufficientData("census carries no word counts");
  return sum_within(cyclic_, metric, radius);
}

double CensusTable::covered_radius(const MetricStructure& metric) const {
  // A word of L-length <= R has at most R/min letters.
  return max_total() * metric.min_length();
}

namespace {

struct WordCounts {
  std::vector<Count> reduced;
  std::vector<Count> cyclic;
};

/// Reduced and cyclically reduced words by occurrence vector for the words
/// whose first letter is a_g (positive). Layered over word length.
void walk_from_generator(const OccurrenceIndex& index, int generator, WordCounts& acc) {
  const int k = index.rank();
  const int letters = 2 * k;
  const int max_total = index.max_total();
  const std::uint8_t first = static_cast<std::uint8_t>(2 * (generator - 1));

  auto layer_size = [&](int n) { return index.layer_end(n) - index.layer_begin(n); };
  std::vector<Count> cur(static_cast<std::size_t>(letters) * layer_size(1));
  std::vector<Count> next;
  {
    std::vector<int> unit(static_cast<std::size_t>(k), 0);
    unit[static_cast<std::size_t>(generator - 1)] = 1;
    const std::size_t idx = *index.find(unit);
    cur[first * layer_size(1) + (idx - index.layer_begin(1))] = 1;
  }
  for (int n = 1; n <= max_total; ++n) {
    const std::size_t begin = index.layer_begin(n);
    const std::size_t size = layer_size(n);
    for (int e = 0; e < letters; ++e) {
      const bool closes = e != (first ^ 1);
      for (std::size_t j = 0; j < size; ++j) {
        const Count& c = cur[static_cast<std::size_t>(e) * size + j];
        if (c == 0) continue;
        acc.reduced[begin + j] += c;
        if (closes) acc.cyclic[begin + j] += c;
      }
    }
    if (n == max_total) break;
    const std::size_t next_begin = index.layer_begin(n + 1);
    const std::size_t next_size = layer_size(n + 1);
    next.assign(static_cast<std::size_t>(letters) * next_size, Count(0));
    for (int e = 0; e < letters; ++e) {
      for (std::size_t j = 0; j < size; ++j) {
        const Count& c = cur[static_cast<std::size_t>(e) * size + j];
        if (c == 0) continue;
        for (int f = 0; f < letters; ++f) {
          if (f == (e ^ 1)) continue;
          const std::size_t target = index.successor(begin + j, f / 2 + 1) - next_begin;
          next[static_cast<std::size_t>(f) * next_size + target] += c;
        }
      }
    }
    cur.swap(next);
  }
}

struct RawCensus {
  std::shared_ptr<const OccurrenceIndex> index;
  std::vector<Count> reduced;
  std::vector<Count> cyclic;
};

RawCensus count_words(int rank, int max_total, unsigned threads) {
  RawCensus raw;
  raw.index = std::make_shared<const OccurrenceIndex>(rank, max_total);
  const std::size_t size = raw.index->size();
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(rank));

  std::vector<WordCounts> partial(workers);
  for (auto& p : partial) {
    p.reduced.assign(size, Count(0));
    p.cyclic.assign(size, Count(0));
  }
  auto work = [&](unsigned w) {
    for (int g = 1 + static_cast<int>(w); g <= rank; g += static_cast<int>(workers))
      walk_from_generator(*raw.index, g, partial[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  // Merge in worker order; inverting a_g maps words starting with a_g onto
  // those starting with a_g^-1 and keeps m, hence the factor 2.
  raw.reduced = std::move(partial[0].reduced);
  raw.cyclic = std::move(partial[0].cyclic);
  for (unsigned w = 1; w < workers; ++w)
    for (std::size_t i = 0; i < size; ++i) {
      raw.reduced[i] += partial[w].reduced[i];
      raw.cyclic[i] += partial[w].cyclic[i];
    }
  for (std::size_t i = 0; i < size; ++i) {
    raw.reduced[i] *= 2;
    raw.cyclic[i] *= 2;
  }
  return raw;
}

/// Root-free classes: primitive words P(m) = sum_{d | gcd m} mu(d) W(m/d), each
/// primitive necklace of length n has exactly n rotations.
std::vector<Count> rootfree_from_cyclic(const OccurrenceIndex& index, std::span<const Count> cyclic) {
  std::vector<Count> out(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto m = index.vector(i);
    const int g = gcd_of(m);
    Count primitive_words = 0;
    for (int d = 1; d <= g; ++d) {
      if (g % d != 0) continue;
      const int mu = mobius(d);
      if (mu == 0) continue;
      const Count& w = cyclic[*index.find(divided(m, d))];
      if (mu > 0)
        primitive_words += w;
      else
        primitive_words -= w;
    }
    const int n = index.total(i);
    if (primitive_words % n != 0) throw std::logic_error("necklace count is not an integer");
    out[i] = primitive_words / n;
  }
  return out;
}

/// Every class is u^d for a unique root-free u.
std::vector<Count> classes_from_rootfree(const OccurrenceIndex& index, std::span<const Count> rootfree) {
  std::vector<Count> out(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto m = index.vector(i);
    const int g = gcd_of(m);
    Count acc = 0;
    for (int d = 1; d <= g; ++d)
      if (g % d == 0) acc += rootfree[*index.find(divided(m, d))];
    out[i] = std::move(acc);
  }
  return out;
}

}  // namespace

CensusTable occurrence_census(int rank, int max_total, ClassKind kind, unsigned threads) {
  if (kind == ClassKind::primitive) throw DomainError("use primitive_census_F2 or census_from_classes for primitives");
  RawCensus raw = count_words(rank, max_total, threads);
  std::vector<Count> rootfree = rootfree_from_cyclic(*raw.index, raw.cyclic);
  std::vector<Count> classes =
      kind == ClassKind::rootfree ? std::move(rootfree) : classes_from_rootfree(*raw.index, rootfree);
  return CensusTable(raw.index, kind, std::move(classes), std::move(raw.reduced), std::move(raw.cyclic));
}

CensusTable primitive_census_F2(int max_total) {
  auto index = std::make_shared<const OccurrenceIndex>(2, max_total);
  std::vector<Count> counts(index->size());
  for (std::size_t i = 0; i < index->size(); ++i) {
    const auto m = index->vector(i);
    if (std::gcd(m[0], m[1]) != 1) continue;
    counts[i] = (m[0] > 0 && m[1] > 0) ? 4 : 2;
  }
  return CensusTable(std::move(index), ClassKind::primitive, std::move(counts));
}

CensusTable census_from_classes(int rank, int max_total, ClassKind kind, const std::set<CyclicWord>& classes) {
  auto index = std::make_shared<const OccurrenceIndex>(rank, max_total);
  std::vector<Count> counts(index->size());
  for (const CyclicWord& c : classes) {
    if (c.rank() != rank) throw DomainError("class rank does not match the census rank");
    if (static_cast<int>(c.length()) > max_total) continue;
    counts[*index->find(occurrence_vector(c))] += 1;
  }
  return CensusTable(std::move(index), kind, std::move(counts));
}

}  // namespace rosesum
