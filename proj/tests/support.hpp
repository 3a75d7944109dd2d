#pragma once

#include <doctest.h>

#include <string>

#include "peakon/numeric.hpp"

namespace peakon::test {

inline Rational R(long n, long d = 1) { return Rational(n, d); }

// |a - b| / max(|b|, tiny), at the current precision.
inline Real rel_err(const Real& a, const Real& b) {
  const Real scale = abs(b) > 0 ? Real(abs(b)) : Real(1);
  return Real(abs(a - b) / scale);
}

inline bool below(const Real& x, const Real& tol) { return x <= tol; }

inline std::string str(const Real& x) { return to_decimal(x, 8); }

}  // namespace peakon::test

// Relative agreement to 10^-e, printing both sides on failure.
#define CHECK_REL(a, b, e)                                                                  \
  do {                                                                                      \
    const ::peakon::Real _a = ::peakon::to_real(a), _b = ::peakon::to_real(b);              \
    INFO(::peakon::test::str(_a), " vs ", ::peakon::test::str(_b));                         \
    CHECK(::peakon::test::rel_err(_a, _b) <= ::peakon::pow10_neg(static_cast<double>(e))); \
  } while (0)

#define CHECK_ABS(a, b, e)                                                      \
  do {                                                                          \
    const ::peakon::Real _a = ::peakon::to_real(a), _b = ::peakon::to_real(b);  \
    INFO(::peakon::test::str(_a), " vs ", ::peakon::test::str(_b));             \
    CHECK(abs(_a - _b) <= ::peakon::pow10_neg(static_cast<double>(e)));         \
  } while (0)
