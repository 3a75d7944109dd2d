#include "peakon/inverse.hpp"

#include <limits>

namespace peakon {

namespace {

// Working precision of a floating point grid; no-op on the exact path.
class GridPrecision {
 public:
  template <class T>
  explicit GridPrecision(const HankelGrid<T>& grid) {
    if constexpr (!is_exact_v<T>) wp_.emplace(grid.table.work_digits);
  }

 private:
  std::optional<WorkingPrecision> wp_;
};

template <class T>
Real as_real(const T& v) {
  if constexpr (is_exact_v<T>) {
    return to_real(v);
  } else {
    return v;
  }
}

template <class T>
T square_upsilon(const HankelGrid<T>& g, int c) {
  const T& a = g.d(-1, c + 2);
  return a * a * g.d(2, c) / (g.d(0, c + 1) * g.d(0, c + 1) * g.d(0, c + 2));
}

}  // namespace

template <class T>
PeakonProfile<T> peakon_profile(const HankelGrid<T>& grid, const ProfileOptions& opts) {
  GridPrecision wp(grid);
  PeakonProfile<T> p;
  p.t = grid.table.t;
  p.digits = is_exact_v<T> ? current_digits() : grid.table.digits;
  p.work_digits = is_exact_v<T> ? current_digits() : grid.table.work_digits;
  p.kappa = kappa(grid);
  p.s_minus1 = grid.table.at(-1);
  const auto& kv = p.kappa.kappa;
  const int K = grid.table.K;

  std::size_t npos = kv.size();
  if (p.kappa.finite) {
    npos = kv.size() - 1;
    p.finite = true;
    p.bound = "support";
  } else {
    p.bound = "moments";
  }
  if (opts.max_peakons && opts.max_peakons < npos) {
    npos = opts.max_peakons;
    p.finite = false;
    p.bound = "requested";
  }

  for (std::size_t n = 0; n < npos; ++n) {
    const int c = kv[n];
    T xt = grid.d(2, c) / grid.d(0, c + 1);
    Real xn = log(as_real(grid.d(2, c))) - log(as_real(grid.d(0, c + 1)));
    if (!p.x.empty() && !(xn > p.x.back())) {
      throw PrecisionError("peakon positions not increasing at n = " + std::to_string(n + 1),
                           2 * std::max(grid.table.work_digits, 30u));
    }
    p.xt.push_back(xt);
    p.x.push_back(xn);
  }

  const Real zero_scale = pow10_neg(p.digits / 2.0);
  for (std::size_t n = 0; n < npos; ++n) {
    const int c = kv[n];
    if (c + 1 > std::min(K, grid.max_delta_k(1))) break;
    const bool gap = grid.is_zero(1, c + 1);
    if (gap && n + 1 >= kv.size()) {
      // Delta_{1,K} vanishes: only the dipole mass at x_N is determined.
      if (grid.has_delta(-1, c + 2)) p.last_upsilon = square_upsilon(grid, c);
      break;
    }
    const T& xt = p.xt[n];
    if (!opts.general_formulas && !gap) {
      p.omega.push_back(grid.d(0, c + 1) * grid.d(2, c) / (grid.d(1, c) * grid.d(1, c + 1)));
      p.upsilon.push_back(T(0));
      continue;
    }
    const int cn = kv[n + 1];
    const T a = grid.d(-1, c + 1) / grid.d(1, c);
    const T b = grid.d(-1, cn + 1) / grid.d(1, cn);
    T w = (a - b) * xt;
    if constexpr (!is_exact_v<T>) {
      if (abs(w) <= zero_scale * (abs(a) + abs(b)) * xt) w = 0;
    }
    p.omega.push_back(w);
    if (!opts.general_formulas) {
      p.upsilon.push_back(square_upsilon(grid, c));
      continue;
    }
    if (!grid.has_delta(-2, c + 2) || !grid.has_delta(-2, cn + 1)) {
      throw ComputationError("Delta_{-2,k} not cached for k = " + std::to_string(cn + 1));
    }
    const T e = grid.d(-2, c + 2) / grid.d(0, c + 1);
    const T f = grid.d(-2, cn + 1) / grid.d(0, cn);
    T v = (e - f) * xt;
    if constexpr (!is_exact_v<T>) {
      const Real tol = zero_scale * (abs(e) + abs(f)) * xt;
      if (abs(v) <= tol) {
        v = 0;
      } else if (v < 0) {
        throw ComputationError("negative dipole weight at n = " + std::to_string(n + 1));
      }
    } else {
      if (v < 0) throw ComputationError("negative dipole weight at n = " + std::to_string(n + 1));
    }
    p.upsilon.push_back(v);
  }
  return p;
}

template <class T>
Real PiecewiseSolution<T>::right_end() const {
  if (extends_right || x.empty()) return Real(std::numeric_limits<double>::infinity());
  return x.back();
}

template <class T>
Real PiecewiseSolution<T>::eval(const Real& xv) const {
  if (x.empty() || xv <= x.front()) return as_real(s_minus1) * exp(xv) / 2;
  if (!extends_right && xv >= x.back()) {
    if (xv == x.back()) return as_real(u.back());
    throw ComputationError("u is only determined left of x_N");
  }
  std::size_t n = 0;
  while (n + 1 < x.size() && x[n + 1] <= xv) ++n;
  const Real d = xv - x[n];
  return as_real(u[n]) * cosh(d) + (as_real(du[n]) - as_real(omega[n])) * sinh(d);
}

template <class T>
Real PiecewiseSolution<T>::eval_derivative(const Real& xv, bool left_limit) const {
  if (x.empty() || xv < x.front() || (left_limit && xv == x.front())) return as_real(s_minus1) * exp(xv) / 2;
  if (!extends_right && (xv > x.back() || (xv == x.back() && !left_limit))) {
    if (xv == x.back()) return as_real(du.back());
    throw ComputationError("u is only determined left of x_N");
  }
  std::size_t n = 0;
  while (n + 1 < x.size() && (x[n + 1] < xv || (x[n + 1] == xv && !left_limit))) ++n;
  const Real d = xv - x[n];
  return as_real(u[n]) * sinh(d) + (as_real(du[n]) - as_real(omega[n])) * cosh(d);
}

template <class T>
PiecewiseSolution<T> reconstruct_u(const PeakonProfile<T>& profile) {
  PiecewiseSolution<T> sol;
  sol.xt = profile.xt;
  sol.x = profile.x;
  sol.omega = profile.omega;
  sol.s_minus1 = profile.s_minus1;
  sol.extends_right = profile.finite;
  if (profile.xt.empty()) return sol;
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(profile.work_digits);

  const std::size_t steps = std::min(profile.xt.size(), profile.omega.size() + 1);
  sol.xt.resize(steps);
  sol.x.resize(steps);
  T un = profile.s_minus1 * profile.xt[0] / 2;
  T dn = un;
  sol.u.push_back(un);
  sol.du.push_back(dn);
  for (std::size_t n = 0; n + 1 < steps; ++n) {
    const T r = profile.xt[n + 1] / profile.xt[n];
    const T ri = T(1) / r;
    const T C = (r + ri) / 2;
    const T S = (r - ri) / 2;
    if constexpr (!is_exact_v<T>) {
      if (abs(S) <= pow10_neg(profile.digits / 2.0)) {
        throw PrecisionError("positions x_" + std::to_string(n + 1) + " and x_" + std::to_string(n + 2) +
                                 " are not resolved",
                             2 * std::max(profile.digits, 30u));
      }
    }
    const T jump = dn - profile.omega[n];
    const T u1 = C * un + S * jump;
    const T d1 = S * un + C * jump;
    un = u1;
    dn = d1;
    sol.u.push_back(un);
    sol.du.push_back(dn);
  }
  sol.omega.resize(std::min(sol.omega.size(), steps));
  if (sol.extends_right && sol.omega.size() < steps) sol.extends_right = false;
  return sol;
}

template <class T>
Real wavefront(const MomentTable<T>& table) {
  const T s0 = table.at(0);
  if (!(s0 > 0)) throw ValidationError("wave front needs s_0 > 0");
  if constexpr (is_exact_v<T>) {
    return Real(0) - log(to_real(s0));
  } else {
    WorkingPrecision wp(table.work_digits);
    return Real(0) - log(rebase(s0));
  }
}

template <class T>
T first_point_mass(const MomentTable<T>& table) {
  if (!table.positive_support) throw ValidationError("first point mass needs a measure on (0, inf)");
  if (table.k_max() < 1) throw ValidationError("first point mass needs s_1");
  const T s1 = table.at(1);
  if (!(s1 > 0)) throw ValidationError("first point mass needs s_1 > 0");
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(table.work_digits);
  return table.at(0) / s1;
}

template <class T>
T quasi_derivative(const HankelGrid<T>& grid, const KappaMap& kappa, std::size_t n) {
  GridPrecision wp(grid);
  const int c = kappa.kappa.at(n - 1);
  return grid.d(2, c) * grid.d(-1, c + 1) / (grid.d(0, c + 1) * grid.d(1, c));
}

template <class T>
PartialSumResidual partial_sum_identities(const PeakonProfile<T>& profile, const HankelGrid<T>& grid,
                                          std::size_t n) {
  GridPrecision wp(grid);
  const auto& kv = profile.kappa.kappa;
  const bool total = profile.finite && n == profile.size() + 1;
  if (n == 0 || (n > profile.size() && !total)) throw ValidationError("index out of range");
  if (n - 1 > profile.omega.size()) throw ValidationError("weights not available up to n");

  T wsum(0), vsum(0), energy(0);
  const PiecewiseSolution<T> sol = reconstruct_u(profile);
  {
    const T a = profile.s_minus1;
    energy += a * a * profile.xt[0];
  }
  for (std::size_t m = 0; m + 1 < n; ++m) {
    wsum += profile.omega[m] / profile.xt[m];
    vsum += profile.upsilon[m] / profile.xt[m];
    const T A = sol.u[m] + sol.du[m] - profile.omega[m];
    if (m + 1 < profile.size()) {
      const T r = profile.xt[m + 1] / profile.xt[m];
      energy += A * A * (r - 1) / profile.xt[m];
    } else {
      // Past the last peakon u + u' is A e^{x - x_m}; finite only if A = 0.
      if constexpr (is_exact_v<T>) {
        if (A != 0) throw ComputationError("energy diverges past the last peakon");
      }
    }
  }
  const int c = total ? kv.back() : kv[n - 1];
  T rhs_w = grid.d(-1, 1) / grid.d(1, 0) - grid.d(-1, c + 1) / grid.d(1, c);
  if (total) rhs_w = grid.d(-1, 1) / grid.d(1, 0);
  const int ke = total ? c + 1 : c + 2;
  const int kd = total ? c : c + 1;
  if (!grid.has_delta(-2, ke)) throw ComputationError("Delta_{-2,k} not cached for k = " + std::to_string(ke));
  const T rhs_e = -grid.d(-2, ke) / grid.d(0, kd);

  PartialSumResidual r;
  r.omega_sum = abs(as_real(T(wsum - rhs_w)));
  r.energy = abs(as_real(T(energy + vsum - rhs_e)));
  return r;
}

#define PEAKON_INSTANTIATE(T)                                                                        \
  template PeakonProfile<T> peakon_profile(const HankelGrid<T>&, const ProfileOptions&);           \
  template struct PiecewiseSolution<T>;                                                             \
  template PiecewiseSolution<T> reconstruct_u(const PeakonProfile<T>&);                             \
  template Real wavefront(const MomentTable<T>&);                                                   \
  template T first_point_mass(const MomentTable<T>&);                                               \
  template T quasi_derivative(const HankelGrid<T>&, const KappaMap&, std::size_t);                  \
  template PartialSumResidual partial_sum_identities(const PeakonProfile<T>&, const HankelGrid<T>&, \
                                                     std::size_t);

PEAKON_INSTANTIATE(Real)
PEAKON_INSTANTIATE(Rational)

}  // namespace peakon
