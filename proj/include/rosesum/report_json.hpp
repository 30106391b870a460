#pragma once

#include <string>

#include <json.hpp>

#include "rosesum/experiments.hpp"
#include "rosesum/metric.hpp"
#include "rosesum/sums.hpp"

namespace rosesum {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

/// 12 significant digits; non-finite values become the strings "inf", "-inf", "nan".
Json number(double x);
Json numbers(const std::vector<double>& xs);

Json to_json(const SumEstimate& e);
Json to_json(const ConvergenceVerdict& v);
Json to_json(const EntropyEstimate& e);
Json to_json(const PointEstimate& p);
Json to_json(const NonConstancyReport& r);
Json to_json(const ConvexityReport& r);
Json to_json(const TheoremCReport& r);
Json to_json(const BlowupTable& t);

/// Grid tables for external plotting.
std::string to_csv(const ConvexityReport& r);
std::string to_csv(const TheoremCReport& r);
std::string to_csv(const BlowupTable& t);

/// Decimal with 12 significant digits, as printed by the CLI.
std::string format12(double x);

}  // namespace rosesum
