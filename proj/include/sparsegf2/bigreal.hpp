#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace sparsegf2 {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
// Variable-precision binary float; precision is taken from the active
// PrecisionScope at construction time.
using BigReal = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;

inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

// Sets the default BigReal precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(BigReal::default_precision()) {
    BigReal::default_precision(bits_to_digits10(bits));
  }
  ~PrecisionScope() { BigReal::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline BigReal to_bigreal(const Rational& q) {
  return BigReal(boost::multiprecision::numerator(q)) /
         BigReal(boost::multiprecision::denominator(q));
}

inline double to_double(const BigReal& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Decimal rendering with `digits` significant digits (0 = all held digits).
inline std::string to_decimal(const BigReal& x, unsigned digits = 0) {
  return x.str(digits == 0 ? static_cast<std::streamsize>(x.precision()) : digits,
               std::ios_base::fmtflags(0));
}

// Exact binomial coefficient; zero outside 0 <= k <= n.
BigInt binomial(long n, long k);

// Integer power by repeated squaring; works for Rational and BigReal alike.
template <class T>
T ipow(T base, unsigned long e) {
  T result(1);
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

// Exact rational from decimal text such as "0.9183", "3", "1e-3" or "1/3".
Rational parse_decimal_rational(const std::string& text);

}  // namespace sparsegf2
