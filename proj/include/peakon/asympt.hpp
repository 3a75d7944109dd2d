#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "peakon/flow.hpp"

namespace peakon {

enum class Regime { PlusInfinity, MinusInfinity, LargeN };

std::string regime_name(Regime r);

// Leading terms plus constant for one peakon. The error is o(1) unless
// `note` says otherwise.
struct PeakonPrediction {
  Regime regime = Regime::LargeN;
  Real x{0};
  Real omega{0};
  std::string note;
};

// x_n(t) ~ speed t + constant, omega_n -> omega_limit as t -> -infinity.
struct DiscreteAsymptote {
  Real speed{0};
  Real constant{0};
  Real omega_limit{0};

  PeakonPrediction at(const Real& t) const;
};

// Prefix of a positive discrete spectrum with increasing eigenvalues.
DiscreteAsymptote predict_discrete(const std::vector<std::pair<Real, Real>>& prefix, std::size_t n);

// t -> +infinity: x_n grows, x_n / t shrinks and omega_n fades along the rows.
struct DiscreteTrend {
  bool diverging = false;
  bool sublinear = false;
  bool fading = false;
};

DiscreteTrend discrete_plus_trend(const TrajectoryTable& table, std::size_t n);

PeakonPrediction predict_laguerre_profile(std::size_t n, const Rational& gamma, const Rational& alpha);

// h_at_inf and h_at_alpha are the limits of a positive weight factor at the
// two spectral edges.
PeakonPrediction predict_laguerre_longtime(std::size_t n, const Real& t, const Rational& gamma,
                                           const Rational& alpha, const Real& h_at_inf = Real(1),
                                           const Real& h_at_alpha = Real(1));

// Delta_{k,n}(t) asymptote; the sign of t picks the regime.
Real predict_laguerre_hankel(int k, int n, const Real& t, const Rational& gamma, const Rational& alpha);

// Constant the gap x_{n+1} - x_n - log(t^2) (t -> -inf) or
// x_{n+1} - x_n - log sqrt(2t) (t -> +inf) tends to.
Real laguerre_gap_constant(std::size_t n, const Real& t, const Rational& gamma, const Rational& alpha);

struct JacobiProfilePrediction {
  PeakonPrediction peakon;
  Real period{0};  // asymptotic spacing of the positions
};

JacobiProfilePrediction predict_jacobi_profile(std::size_t n, const Rational& a, const Rational& b,
                                               const Rational& alpha);

PeakonPrediction predict_jacobi_longtime(std::size_t n, const Real& t, const Rational& a, const Rational& b,
                                         const Rational& alpha);

Real predict_jacobi_hankel(int k, int n, const Real& t, const Rational& a, const Rational& b,
                           const Rational& alpha);

// Constant the gap x_{n+1} - x_n - log(t^2) tends to.
Real jacobi_gap_constant(std::size_t n, const Real& t, const Rational& a, const Rational& b, const Rational& alpha);

struct AscPeakon {
  Rational xt;     // e^{x_n}
  Rational omega;
  Real x{0};
};

// Closed form profile at t = 0, n >= 1.
AscPeakon asc_profile(std::size_t n, const Rational& a, const Rational& q);

// -log((aq;q)_inf), the accumulation point at t = 0.
Real asc_limit(const Rational& a, const Rational& q);

struct ComparisonRow {
  std::string quantity;  // "x" or "omega"
  std::size_t n = 0;
  Real t{0};
  Real computed{0};
  Real predicted{0};
  Real abs_err{0};
  Real rel_err{0};
};

using Predictor = std::function<PeakonPrediction(std::size_t n, const Real& t)>;

std::vector<ComparisonRow> compare(const TrajectoryTable& table, const Predictor& predict);

// Least squares slope of log|abs_err| against log|t| for one quantity and n.
Real error_trend(const std::vector<ComparisonRow>& rows, const std::string& quantity, std::size_t n);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, int digits);

}  // namespace peakon
