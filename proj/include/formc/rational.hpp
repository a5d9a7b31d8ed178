#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>

namespace formc {

using Int = boost::multiprecision::cpp_int;

/// Exact rational scalar. Backed by boost::multiprecision, which keeps the
/// denominator positive and the fraction reduced after every operation.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
  return Rational(Int(num), Int(den));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// [num, den] pair for JSON dumps. Values in this project fit 64 bits.
inline std::pair<std::int64_t, std::int64_t> to_int64_pair(const Rational& r) {
  return {numerator(r).convert_to<std::int64_t>(),
          denominator(r).convert_to<std::int64_t>()};
}

inline std::string to_string(const Rational& r) {
  return r.str();
}

}  // namespace formc
