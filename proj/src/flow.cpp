#include "peakon/flow.hpp"

#include <algorithm>
#include <cmath>

namespace peakon {

namespace {

Real total_time(const SpectralMeasureSpec& spec, const Real& t) { return spec.time_offset + t; }

PeakonProfile<Real> profile_at(const SpectralMeasureSpec& spec, const Real& t, std::size_t N, unsigned digits,
                               HankelGrid<Real>* grid_out = nullptr) {
  const MomentTable<Real> table = moments(spec, t, order_for(N), digits);
  HankelGrid<Real> grid = build_grid(table);
  ProfileOptions po;
  po.max_peakons = N;
  PeakonProfile<Real> p = peakon_profile(grid, po);
  if (grid_out) *grid_out = std::move(grid);
  return p;
}

bool has_collision(const HankelGrid<Real>& grid) {
  const int top = std::min(grid.table.K, grid.max_delta_k(1));
  const int D = grid.table.support_size ? static_cast<int>(*grid.table.support_size) : top;
  for (int k = 1; k <= std::min(top, D); ++k)
    if (grid.is_zero(1, k)) return true;
  return false;
}

Real delta1(const SpectralMeasureSpec& spec, const Real& t, int k, unsigned digits) {
  const MomentTable<Real> table = moments(spec, t, k, digits);
  WorkingPrecision wp(table.work_digits);
  return hankel_det(table, 1, k);
}

}  // namespace

SampleGrid SampleGrid::parse(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ValidationError("grid must be a:b:step");
  SampleGrid g;
  g.a = to_real(parse_rational(text.substr(0, c1)));
  g.b = to_real(parse_rational(text.substr(c1 + 1, c2 - c1 - 1)));
  g.step = to_real(parse_rational(text.substr(c2 + 1)));
  if (!(g.step > 0) || g.b < g.a) throw ValidationError("grid needs a <= b and step > 0");
  return g;
}

std::vector<Real> SampleGrid::points() const {
  std::vector<Real> out;
  const long count = static_cast<long>(floor((b - a) / step + Real("1e-20")).convert_to<double>());
  if (count > 10000000) throw ValidationError("grid has too many points");
  for (long i = 0; i <= count; ++i) out.push_back(a + step * i);
  return out;
}

int order_for(std::size_t N) { return static_cast<int>(N) + 2; }

Snapshot snapshot(const SpectralMeasureSpec& spec, const Real& t, std::size_t N, unsigned digits,
                  const std::optional<SampleGrid>& grid) {
  if (N == 0) throw ValidationError("at least one peakon must be requested");
  Snapshot s;
  s.profile = profile_at(spec, t, N, digits);
  WorkingPrecision wp(s.profile.work_digits);
  s.solution = reconstruct_u(s.profile);
  if (grid) {
    const Real end = s.solution.right_end();
    for (const Real& x : grid->points()) {
      if (x > end) break;
      s.samples.emplace_back(x, s.solution.eval(x));
    }
  }
  return s;
}

TrajectoryTable trajectory(const SpectralMeasureSpec& spec, const std::vector<Real>& times, std::size_t N,
                           unsigned digits) {
  TrajectoryTable tt;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw ValidationError("time grid must be strictly increasing");
    tt.times.push_back(times[i]);
    tt.rows.push_back(profile_at(spec, times[i], N, digits));
    if (i > 0) tt.kappa_changed.push_back(tt.rows[i].kappa.kappa != tt.rows[i - 1].kappa.kappa);
  }
  return tt;
}

Real default_step(unsigned digits) {
  const double e = std::clamp(digits / 8.0, 3.0, 6.0);
  return pow10_neg(e);
}

OdeResidual ode_residual(const SpectralMeasureSpec& spec, const Real& t, std::size_t n, const Real& h,
                         unsigned digits) {
  if (n == 0) throw ValidationError("peakon index is 1-based");
  HankelGrid<Real> gm, g0, gp;
  const PeakonProfile<Real> pm = profile_at(spec, t - h, n, digits, &gm);
  const PeakonProfile<Real> p0 = profile_at(spec, t, n, digits, &g0);
  const PeakonProfile<Real> pp = profile_at(spec, t + h, n, digits, &gp);
  if (has_collision(gm) || has_collision(g0) || has_collision(gp)) {
    throw ComputationError("collision within [t-h, t+h]; ODE residual rejected");
  }
  if (p0.omega.size() < n || pm.omega.size() < n || pp.omega.size() < n) {
    throw ComputationError("fewer than n peakons available");
  }
  WorkingPrecision wp(p0.work_digits);
  const PiecewiseSolution<Real> sol = reconstruct_u(p0);
  const std::size_t i = n - 1;
  OdeResidual r;
  const Real xdot = (pp.x[i] - pm.x[i]) / (2 * h);
  r.r_x = abs(xdot - sol.u[i]);
  const Real wdot = (pp.omega[i] - pm.omega[i]) / (2 * h);
  const Real mean_slope = sol.du[i] - sol.omega[i] / 2;
  r.r_omega = abs(wdot * (-1 / p0.omega[i]) - mean_slope);
  return r;
}

InfiniteOdeResidual infinite_ode_residual(const SpectralMeasureSpec& spec, const Real& t, std::size_t n,
                                          std::size_t N_trunc, const Real& h, unsigned digits,
                                          double tail_tolerance) {
  if (!spec.positive_support()) throw ValidationError("infinite ODE check needs positive support");
  if (n == 0 || n > N_trunc) throw ValidationError("need 1 <= n <= N_trunc");
  const PeakonProfile<Real> pm = profile_at(spec, t - h, n, digits);
  const PeakonProfile<Real> pp = profile_at(spec, t + h, n, digits);
  const PeakonProfile<Real> p0 = profile_at(spec, t, N_trunc, digits);
  if (p0.omega.size() < N_trunc && !p0.finite) throw ComputationError("fewer than N_trunc peakons available");
  WorkingPrecision wp(p0.work_digits);
  const std::size_t i = n - 1, M = p0.omega.size();
  Real xrhs(0), wrhs(0);
  for (std::size_t k = 0; k < M; ++k) {
    const Real e = exp(-abs(p0.x[i] - p0.x[k]));
    xrhs += p0.omega[k] * e;
    if (k < i) wrhs += p0.omega[k] * e;
    if (k > i) wrhs -= p0.omega[k] * e;
  }
  xrhs /= 2;
  wrhs *= p0.omega[i] / 2;
  InfiniteOdeResidual r;
  if (!p0.finite && M >= 2) {
    // Geometric continuation of the last two terms.
    const Real last = abs(p0.omega[M - 1]) * exp(p0.x[i] - p0.x[M - 1]);
    const Real ratio = abs(p0.omega[M - 1] / p0.omega[M - 2]) * exp(p0.x[M - 2] - p0.x[M - 1]);
    r.tail_estimate = ratio < 1 ? Real(last * ratio / (1 - ratio)) : Real(std::numeric_limits<double>::infinity());
    if (r.tail_estimate > tail_tolerance) throw TruncationError("tail estimate too large: increase N_trunc");
  }
  r.r_x = abs((pp.x[i] - pm.x[i]) / (2 * h) - xrhs);
  r.r_omega = abs((pp.omega[i] - pm.omega[i]) / (2 * h) - wrhs);
  return r;
}

Real moment_derivative_residual(const SpectralMeasureSpec& spec, const Real& t, int l, const Real& h,
                                unsigned digits) {
  if (l < 0) throw ValidationError("moment index must be >= 0");
  const int K = std::max(1, (l + 1) / 2);
  const MomentTable<Real> a = moments(spec, t - h, K, digits);
  const MomentTable<Real> b = moments(spec, t + h, K, digits);
  const MomentTable<Real> c = moments(spec, t, K, digits);
  WorkingPrecision wp(c.work_digits);
  return abs((b.at(l) - a.at(l)) / (2 * h) + c.at(l - 1) / 2);
}

CollisionReport collision_scan(const SpectralMeasureSpec& spec, int k, const Real& t0, const Real& t1,
                               unsigned digits, const Real& tolerance) {
  if (k < 1) throw ValidationError("collision scan needs k >= 1");
  if (!(t1 > t0)) throw ValidationError("collision scan needs t0 < t1");
  CollisionReport rep;
  rep.k = k;
  if (spec.positive_support()) {
    rep.note = "positive support: no collisions";
    return rep;
  }
  if (spec.kind != MeasureKind::FiniteDiscrete) throw ValidationError("collision scan needs a discrete measure");
  if (spec.atoms.size() < 2) {
    rep.note = "fewer than two atoms";
    return rep;
  }
  WorkingPrecision wp(digits + 20);

  // Step from the closest pair of decay rates 1/(2 lambda).
  Real sep(0), span = t1 - t0;
  for (std::size_t i = 0; i < spec.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < spec.atoms.size(); ++j)
      sep = max(sep, abs(1 / (2 * spec.atoms[i].lambda) - 1 / (2 * spec.atoms[j].lambda)));
  Real step = min(span / 64, Real(1) / (4 * sep));
  const std::size_t cells = static_cast<std::size_t>(ceil(span / step).convert_to<double>());
  if (cells > 200000) {
    rep.complete = false;
    rep.note = "grid capped at 200000 cells";
  }
  const std::size_t n_cells = std::min<std::size_t>(cells, 200000);
  step = span / n_cells;
  rep.grid_step = step;
  rep.grid_points = n_cells + 1;

  auto value = [&](const Real& t) { return delta1(spec, t, k, digits); };
  auto dvalue = [&](const Real& t) {
    const MomentTable<Real> table = moments(spec, t, k, digits);
    WorkingPrecision inner(table.work_digits);
    return Real(-gamma_det(table, 0, k) / 2);
  };
  auto is_tiny = [&](const Real& t, const Real& v) {
    const MomentTable<Real> table = moments(spec, t, k + 1, digits);
    WorkingPrecision inner(table.work_digits);
    const Real scale = sqrt(abs(hankel_det(table, 0, k) * hankel_det(table, 2, k)));
    return abs(v) <= scale * pow10_neg(digits / 2.0);
  };

  std::vector<std::pair<Real, Real>> brackets;
  Real ta = t0, va = value(ta);
  bool last_was_root = false;
  if (is_tiny(ta, va)) {
    brackets.emplace_back(ta, ta);
    last_was_root = true;
  }
  for (std::size_t i = 1; i <= n_cells; ++i) {
    const Real tb = i == n_cells ? t1 : Real(t0 + step * i);
    const Real vb = value(tb);
    if (is_tiny(tb, vb)) {
      brackets.emplace_back(tb, tb);
      last_was_root = true;
    } else {
      if (!last_was_root && ((va < 0) != (vb < 0))) brackets.emplace_back(ta, tb);
      last_was_root = false;
    }
    ta = tb;
    va = vb;
  }

  for (auto [lo, hi] : brackets) {
    CollisionRoot root;
    Real tr = lo;
    if (lo != hi) {
      Real vlo = value(lo);
      while (hi - lo > tolerance) {
        const Real mid = (lo + hi) / 2;
        const Real vm = value(mid);
        if (vm == 0) {
          lo = hi = mid;
          break;
        }
        if ((vm < 0) == (vlo < 0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      // Newton with d/dt Delta_{1,k} = -Gamma_{0,k}/2 to full precision.
      tr = (lo + hi) / 2;
      const Real eps = pow10_neg(digits + 5.0);
      for (int it = 0; it < 60; ++it) {
        const Real d = dvalue(tr);
        if (d == 0) break;
        const Real dt = value(tr) / d;
        tr -= dt;
        if (abs(dt) <= eps * max(Real(1), abs(tr))) break;
      }
      if (tr < lo - tolerance || tr > hi + tolerance) tr = (lo + hi) / 2;
    }
    root.t = tr;
    root.lo = lo;
    root.hi = hi;
    const PeakonProfile<Real> p = profile_at(spec, tr, static_cast<std::size_t>(k) + 1, digits);
    root.points = p.size();
    for (const auto& v : p.upsilon) root.upsilon_mass += v;
    if (p.last_upsilon) root.upsilon_mass += *p.last_upsilon;
    rep.roots.push_back(root);
  }
  return rep;
}

Accumulation accumulation_L(const SpectralMeasureSpec& spec, const Real& t, std::size_t terms) {
  if (!spec.is_discrete()) throw ValidationError("accumulation point needs a discrete spectrum");
  if (spec.kind == MeasureKind::AlSalamCarlitz && terms == 0) terms = 120;
  const RhoPlus rp = rho_plus(spec, terms);
  const Real tt = total_time(spec, t);
  Accumulation acc;
  Real sum(0);
  for (const auto& a : rp.measure.atoms) sum += exp(tt / (2 * a.lambda)) * a.gamma;
  acc.L = log(sum);
  if (rp.truncation_bound > 0) {
    const Real& lam = rp.measure.atoms.back().lambda;
    Real total(0);
    for (const auto& a : rp.measure.atoms) total += a.gamma;
    acc.truncation_bound = rp.truncation_bound * total * max(Real(1), exp(tt / (2 * lam))) / sum;
  }
  return acc;
}

Momentum total_momentum(const SpectralMeasureSpec& spec, const Real& t, std::size_t N_trunc, unsigned digits) {
  if (!spec.positive_support()) throw ValidationError("total momentum needs positive support");
  if (spec.kind != MeasureKind::FiniteDiscrete && spec.kind != MeasureKind::AlSalamCarlitz) {
    throw ValidationError("heights are not summable for this family");
  }
  const PeakonProfile<Real> p = profile_at(spec, t, N_trunc, digits);
  WorkingPrecision wp(p.work_digits);
  Momentum m;
  for (const auto& w : p.omega) m.value += w;
  const std::size_t M = p.omega.size();
  if (!p.finite && M >= 2) {
    const Real ratio = p.omega[M - 1] / p.omega[M - 2];
    m.tail_bound = ratio < 1 ? Real(p.omega[M - 1] * ratio / (1 - ratio)) : Real(std::numeric_limits<double>::infinity());
  }
  return m;
}

template <class T>
ScalingResidual scaling_check(const MomentTable<T>& table, const Rational& c, const Rational& d) {
  if (!(c > 0) || d == 0) throw ValidationError("scaling needs c > 0 and d != 0");
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(table.work_digits);
  MomentTable<T> scaled = table;
  const T cc = from_rational<T>(c), dd = from_rational<T>(d);
  T factor = cc / dd;
  for (auto& s : scaled.s) {
    s *= factor;
    factor *= dd;
  }
  if (d < 0) scaled.positive_support = false;
  const PeakonProfile<T> a = peakon_profile(build_grid(table));
  const PeakonProfile<T> b = peakon_profile(build_grid(scaled));
  if (a.size() != b.size() || a.omega.size() != b.omega.size()) {
    throw ComputationError("scaled profile has a different length");
  }
  ScalingResidual r;
  for (std::size_t n = 0; n < a.size(); ++n) {
    r.x = max(r.x, Real(abs(to_real(T(b.xt[n] * cc - a.xt[n])) / to_real(a.xt[n]))));
  }
  for (std::size_t n = 0; n < a.omega.size(); ++n) {
    r.omega = max(r.omega, Real(abs(to_real(T(b.omega[n] * dd - a.omega[n])) / to_real(a.omega[n]))));
  }
  return r;
}

PeakonState peakon_rhs(const PeakonState& s) {
  const std::size_t N = s.q.size();
  PeakonState d{std::vector<Real>(N, Real(0)), std::vector<Real>(N, Real(0))};
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const Real e = exp(-abs(s.q[i] - s.q[j]));
      d.q[i] += s.p[j] * e;
      if (s.q[i] > s.q[j]) d.p[i] += s.p[j] * e;
      if (s.q[i] < s.q[j]) d.p[i] -= s.p[j] * e;
    }
    d.q[i] /= 2;
    d.p[i] *= s.p[i] / 2;
  }
  return d;
}

namespace {

PeakonState axpy(const PeakonState& s, const Real& h, const PeakonState& d) {
  PeakonState r = s;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    r.q[i] += h * d.q[i];
    r.p[i] += h * d.p[i];
  }
  return r;
}

PeakonState rk4_step(const PeakonState& s, const Real& h) {
  const PeakonState k1 = peakon_rhs(s);
  const PeakonState k2 = peakon_rhs(axpy(s, h / 2, k1));
  const PeakonState k3 = peakon_rhs(axpy(s, h / 2, k2));
  const PeakonState k4 = peakon_rhs(axpy(s, h, k3));
  PeakonState r = s;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    r.q[i] += h / 6 * (k1.q[i] + 2 * k2.q[i] + 2 * k3.q[i] + k4.q[i]);
    r.p[i] += h / 6 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
  }
  return r;
}

}  // namespace

PeakonState integrate_peakons(PeakonState s, const Real& t_end, std::size_t steps) {
  if (steps == 0) throw ValidationError("need at least one step");
  const Real h = t_end / steps;
  for (std::size_t i = 0; i < steps; ++i) s = rk4_step(s, h);
  return s;
}

Real two_peakon_collision_time(PeakonState s, const Real& t_max, double step_fraction) {
  if (s.q.size() != 2) throw ValidationError("two peakons expected");
  Real t(0);
  const Real stop = pow10_neg(current_digits() / 3.0);
  for (std::size_t it = 0; it < 100000000; ++it) {
    const Real gap = s.q[1] - s.q[0];
    if (!(gap > 0)) throw ComputationError("peakons crossed between steps");
    const PeakonState d = peakon_rhs(s);
    const Real closing = d.q[0] - d.q[1];
    // Near collision the gap shrinks quadratically in the remaining time.
    const Real remaining = closing > 0 ? Real(2 * gap / closing) : Real(t_max);
    if (gap < stop) return t + remaining;
    if (t > t_max) throw ComputationError("no collision before t_max");
    const Real h = min(Real(step_fraction) * remaining, Real(step_fraction) * 10);
    s = rk4_step(s, h);
    t += h;
  }
  throw ComputationError("collision integration did not finish");
}

template ScalingResidual scaling_check(const MomentTable<Real>&, const Rational&, const Rational&);
template ScalingResidual scaling_check(const MomentTable<Rational>&, const Rational&, const Rational&);

}  // namespace peakon
