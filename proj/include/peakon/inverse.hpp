#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peakon/hankel.hpp"

namespace peakon {

template <class T>
struct PeakonProfile {
  Real t{0};
  std::vector<T> xt;        // e^{x_n}, exact on the rational path
  std::vector<Real> x;      // x_n = log Delta_{2,kappa(n)} - log Delta_{0,kappa(n)+1}
  std::vector<T> omega;     // heights, one per completed peakon
  std::vector<T> upsilon;   // dipole weights
  T s_minus1{0};
  std::optional<T> last_upsilon;  // mass at x_N when Delta_{1,K} vanishes
  KappaMap kappa;
  bool finite = false;      // all peakons recovered (finite support)
  std::string bound;        // "support", "moments" or "requested"
  unsigned digits = 0;
  unsigned work_digits = 0;

  std::size_t size() const { return xt.size(); }
};

struct ProfileOptions {
  // Cap on the number of positions; 0 keeps everything the grid allows.
  std::size_t max_peakons = 0;
  // Use the difference forms for omega and upsilon even when the closed
  // forms apply.
  bool general_formulas = false;
};

template <class T>
PeakonProfile<T> peakon_profile(const HankelGrid<T>& grid, const ProfileOptions& opts = {});

// u = (s_{-1}/2) e^x left of x_1, cosh/sinh pieces between peakons.
template <class T>
struct PiecewiseSolution {
  std::vector<T> xt;     // e^{x_n}
  std::vector<Real> x;
  std::vector<T> u;      // u(x_n)
  std::vector<T> du;     // u'(x_n-)
  std::vector<T> omega;  // jump data, u'(x_n+) = u'(x_n-) - omega_n
  T s_minus1{0};
  bool extends_right = false;  // finite profile: formula valid past x_N

  Real right_end() const;  // x_N, or +inf for finite profiles
  Real eval(const Real& xv) const;
  Real eval_derivative(const Real& xv, bool left_limit) const;
};

template <class T>
PiecewiseSolution<T> reconstruct_u(const PeakonProfile<T>& profile);

// -log s_0; the same floating point operations as x_1 of the profile.
template <class T>
Real wavefront(const MomentTable<T>& table);

// s_0 / s_1 for measures on the positive half line.
template <class T>
T first_point_mass(const MomentTable<T>& table);

struct PartialSumResidual {
  Real omega_sum{0};   // sum_{m<n} omega_m e^{-x_m} vs the Delta expression
  Real energy{0};      // energy plus dipole identity
};

// Residuals of the partial sum identities at index n (1-based). For a finite
// profile n = N+1 checks the totals over the whole line.
template <class T>
PartialSumResidual partial_sum_identities(const PeakonProfile<T>& profile, const HankelGrid<T>& grid,
                                          std::size_t n);

// u(x_n) + u'(x_n-) from Hankel data, for checking reconstructions.
template <class T>
T quasi_derivative(const HankelGrid<T>& grid, const KappaMap& kappa, std::size_t n);

}  // namespace peakon
