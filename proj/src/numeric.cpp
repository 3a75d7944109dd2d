#include "peakon/numeric.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

namespace peakon {

WorkingPrecision::WorkingPrecision(unsigned digits) : saved_(Real::default_precision()) {
  Real::default_precision(digits);
}

WorkingPrecision::~WorkingPrecision() { Real::default_precision(saved_); }

unsigned current_digits() { return Real::default_precision(); }

Real rebase(const Real& x) {
  Real r;
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

Rational parse_rational(const std::string& text) {
  static const std::regex fraction(R"(^\s*([+-]?\d+)\s*/\s*(\d+)\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, fraction)) {
    auto integer = [](std::string d) {
      const bool neg = !d.empty() && d[0] == '-';
      if (!d.empty() && (d[0] == '-' || d[0] == '+')) d.erase(0, 1);
      d.erase(0, std::min(d.find_first_not_of('0'), d.size()));
      Integer v(d.empty() ? std::string("0") : d);
      return neg ? Integer(-v) : v;
    };
    const Integer den = integer(m[2].str());
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    return Rational(integer(m[1].str()), den);
  }
  if (!std::regex_match(text, m, decimal) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw ValidationError("not a decimal number: '" + text + "'");
  }
  std::string digits = m[2].str() + m[3].str();
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) digits = "0";
  long exponent = -static_cast<long>(m[3].length());
  if (m[4].matched) exponent += std::stol(m[4].str());
  if (exponent > 100000 || exponent < -100000) throw ValidationError("exponent out of range: '" + text + "'");
  Integer mant(digits);
  if (m[1] == "-") mant = -mant;
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(mant * scale) : Rational(mant, scale);
}

std::string to_decimal(const Real& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

std::string to_decimal(const Rational& q, int digits) {
  WorkingPrecision wp(static_cast<unsigned>(digits) + 10);
  return to_decimal(to_real(q), digits);
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real log_gamma(const Real& x) {
  Real r;
  int sign = 0;
  mpfr_lgamma(r.backend().data(), &sign, x.backend().data(), MPFR_RNDN);
  return r;
}

Real gamma_fn(const Real& x) {
  Real r;
  mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

Real pow10_neg(double e) {
  Real ten(10);
  return pow(ten, Real(-e));
}

double log10_abs(const Real& x) {
  if (x == 0) return -std::numeric_limits<double>::max();
  long exp2 = 0;
  double mant = mpfr_get_d_2exp(&exp2, x.backend().data(), MPFR_RNDN);
  return std::log10(std::fabs(mant)) + static_cast<double>(exp2) * std::log10(2.0);
}

double log10_abs(const Rational& q) {
  if (q == 0) return -std::numeric_limits<double>::max();
  WorkingPrecision wp(30);
  return log10_abs(to_real(q));
}

Real rel_diff(const Real& a, const Real& b) {
  Real scale = max(abs(a), abs(b));
  if (scale == 0) return Real(0);
  return abs(a - b) / scale;
}

}  // namespace peakon
