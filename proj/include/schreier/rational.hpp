#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace schreier {

/// Exact arithmetic for all counting ratios (edit distance, Cheeger values,
/// component fractions). Counts in this library stay far below 2^32, so an
/// int64 backing never overflows the cross multiplications.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace schreier
