#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace peakon {

using Real = boost::multiprecision::mpfr_float;
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// Error taxonomy. The CLI maps ValidationError to exit code 1, the
// computation family to 2 and IoError to 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PrecisionError : ComputationError {
  PrecisionError(const std::string& what, unsigned suggested)
      : ComputationError(what), suggested_digits(suggested) {}
  unsigned suggested_digits;
};

struct TruncationError : ComputationError {
  using ComputationError::ComputationError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scoped working precision (decimal digits) for newly created Reals.
// The MPFR default precision is process global, so this is not thread safe.
class WorkingPrecision {
 public:
  explicit WorkingPrecision(unsigned digits);
  ~WorkingPrecision();
  WorkingPrecision(const WorkingPrecision&) = delete;
  WorkingPrecision& operator=(const WorkingPrecision&) = delete;

 private:
  unsigned saved_;
};

unsigned current_digits();

// Copy of x rounded to the current working precision.
Real rebase(const Real& x);
Real to_real(const Rational& q);
inline Real to_real(const Real& x) { return rebase(x); }

// Accepts "12", "-3/4", "0.125", "1.5e-3".
Rational parse_rational(const std::string& text);

// Scientific notation with the given number of significant digits.
std::string to_decimal(const Real& x, int digits);
std::string to_decimal(const Rational& q, int digits);

Real pi();
Real log_gamma(const Real& x);
Real gamma_fn(const Real& x);

// 10^-e at the working precision.
Real pow10_neg(double e);

// log10 |x|, or a huge negative number for zero.
double log10_abs(const Real& x);
double log10_abs(const Rational& q);

// Relative distance |a-b| / max(|a|,|b|), zero if both vanish.
Real rel_diff(const Real& a, const Real& b);

template <class T>
T abs_of(const T& x) {
  return x < 0 ? T(-x) : x;
}

// Generic conversion used by templated algorithms to lift data into T.
template <class T>
T from_rational(const Rational& q) {
  if constexpr (is_exact_v<T>) {
    return q;
  } else {
    return to_real(q);
  }
}

}  // namespace peakon
