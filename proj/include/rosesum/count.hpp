#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace rosesum {

/// Exact non-negative counts; word counts on the rose outgrow 64 bits past ~40 letters.
using Count = boost::multiprecision::cpp_int;

inline std::string to_decimal(const Count& c) { return c.str(); }

inline double to_double(const Count& c) { return c.convert_to<double>(); }

}  // namespace rosesum
