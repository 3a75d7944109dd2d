#include "peakon/forward.hpp"

#include <cmath>

namespace peakon {

namespace {

template <class T>
using Poly = std::vector<T>;

template <class T>
void trim(Poly<T>& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

template <class T>
T peval(const Poly<T>& p, const T& z) {
  T acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

template <class T>
Poly<T> pderiv(const Poly<T>& p) {
  Poly<T> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<int>(i));
  if (d.empty()) d.push_back(T(0));
  return d;
}

// Remainder of a / b.
template <class T>
Poly<T> prem(Poly<T> a, const Poly<T>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const T f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
  }
  if (a.empty()) a.push_back(T(0));
  trim(a);
  return a;
}

template <class T>
bool negligible(const Poly<T>& p, const Real& scale) {
  if constexpr (is_exact_v<T>) {
    (void)scale;
    return p.size() == 1 && p[0] == 0;
  } else {
    for (const auto& c : p)
      if (abs(c) > scale) return false;
    return true;
  }
}

template <class T>
std::vector<Poly<T>> sturm_chain(const Poly<T>& p) {
  std::vector<Poly<T>> chain{p, pderiv(p)};
  Real scale(0);
  if constexpr (!is_exact_v<T>) {
    for (const auto& c : p) scale = max(scale, abs(c));
    scale *= pow10_neg(current_digits() * 0.6);
  }
  while (true) {
    Poly<T> r = prem(chain[chain.size() - 2], chain.back());
    if constexpr (!is_exact_v<T>) {
      Real rs(0);
      for (const auto& c : chain.back()) rs = max(rs, abs(c));
      if (negligible(r, scale * max(rs, Real(1)))) break;
    } else {
      if (negligible(r, scale)) break;
    }
    for (auto& c : r) c = -c;
    trim(r);
    chain.push_back(std::move(r));
    if (chain.back().size() == 1) break;
  }
  return chain;
}

template <class T>
int sign_changes(const std::vector<Poly<T>>& chain, const T& z) {
  int changes = 0;
  int prev = 0;
  for (const auto& p : chain) {
    const T v = peval(p, z);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

template <class T>
void isolate(const std::vector<Poly<T>>& chain, const T& lo, const T& hi, int vlo, int vhi,
             std::vector<std::pair<T, T>>& out, int depth) {
  const int count = vlo - vhi;
  if (count <= 0) return;
  if (count == 1) {
    out.emplace_back(lo, hi);
    return;
  }
  if (depth > 400) throw ValidationError("not a valid string: poles could not be separated");
  // Off-centre split keeps exact rational roots away from the cut points.
  const T mid = lo + (hi - lo) * T(7) / T(17);
  const int vm = sign_changes(chain, mid);
  isolate(chain, lo, mid, vlo, vm, out, depth + 1);
  isolate(chain, mid, hi, vm, vhi, out, depth + 1);
}

Real polish(const Poly<Real>& p, Real lo, Real hi, unsigned digits) {
  const Poly<Real> dp = pderiv(p);
  Real flo = peval(p, lo);
  Real x = (lo + hi) / 2;
  const Real tol = pow10_neg(digits + 5.0);
  for (int it = 0; it < 10000; ++it) {
    const Real fx = peval(p, x);
    if (fx == 0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const Real d = peval(dp, x);
    Real next = d != 0 ? Real(x - fx / d) : Real((lo + hi) / 2);
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (abs(next - x) <= tol * max(Real(1), abs(x))) return next;
    x = next;
  }
  throw ComputationError("pole refinement did not converge");
}

}  // namespace

template <class T>
T KreinLangerString<T>::gap(std::size_t n) const {
  if (n == 0 || n > xt.size()) throw ValidationError("gap index out of range");
  return n == 1 ? xt[0] : T(xt[n - 1] - xt[n - 2]);
}

template <class T>
std::pair<Real, Real> RationalWeylFunction<T>::eval(const Real& re, const Real& im) const {
  auto ceval = [&](const Poly<T>& p) {
    Real a(0), b(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
      const Real na = a * re - b * im + to_real(*it);
      const Real nb = a * im + b * re;
      a = na;
      b = nb;
    }
    return std::make_pair(a, b);
  };
  const auto [nr, ni] = ceval(num);
  const auto [dr, di] = ceval(den);
  const Real q = dr * dr + di * di;
  return {(nr * dr + ni * di) / q, (ni * dr - nr * di) / q};
}

template <class T>
KreinLangerString<T> string_from_profile(const PeakonProfile<T>& profile) {
  if (!profile.finite || profile.omega.size() != profile.size()) {
    throw ValidationError("string_from_profile needs a finite profile");
  }
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(profile.work_digits);
  KreinLangerString<T> s;
  for (std::size_t n = 0; n < profile.size(); ++n) {
    s.xt.push_back(profile.xt[n]);
    s.w.push_back(profile.omega[n] / profile.xt[n]);
    s.v.push_back(profile.upsilon[n] / profile.xt[n]);
    s.w0 -= s.w.back();
  }
  return s;
}

template <class T>
RationalWeylFunction<T> weyl_from_string(const KreinLangerString<T>& s) {
  if (s.L) throw ValidationError("only strings of infinite length are supported");
  const std::size_t N = s.size();
  RationalWeylFunction<T> m;
  if (N == 0) {
    m.num = {s.w0, s.v0};
    m.den = {T(1)};
    trim(m.num);
    return m;
  }
  Poly<T> num{s.w[N - 1], s.v[N - 1]};
  Poly<T> den{T(1)};
  for (std::size_t n = N; n >= 1; --n) {
    const T ell = s.gap(n);
    if (ell == 0 || ell < 0) throw ValidationError("degenerate gap in string");
    // v -> 1 / (-ell z + 1 / v)
    Poly<T> nd(std::max(den.size(), num.size() + 1), T(0));
    for (std::size_t i = 0; i < den.size(); ++i) nd[i] += den[i];
    for (std::size_t i = 0; i < num.size(); ++i) nd[i + 1] -= ell * num[i];
    den = std::move(nd);
    // v -> c_{n-1} + v
    const T c0 = n >= 2 ? s.w[n - 2] : s.w0;
    const T c1 = n >= 2 ? s.v[n - 2] : s.v0;
    Poly<T> nn(std::max(num.size(), den.size() + 1), T(0));
    for (std::size_t i = 0; i < num.size(); ++i) nn[i] += num[i];
    for (std::size_t i = 0; i < den.size(); ++i) {
      nn[i] += c0 * den[i];
      nn[i + 1] += c1 * den[i];
    }
    num = std::move(nn);
  }
  trim(num);
  trim(den);
  m.num = std::move(num);
  m.den = std::move(den);
  return m;
}

template <class T>
SpectralMeasureSpec measure_from_weyl(const RationalWeylFunction<T>& m, unsigned digits) {
  Poly<T> den = m.den;
  trim(den);
  const std::size_t d = den.size() - 1;
  if (d == 0) return finite_discrete_real({});
  const unsigned work = digits + 20;
  WorkingPrecision wp(work);
  if (den[0] == 0) throw ValidationError("Weyl function has a pole at 0");

  // Real roots inside the Cauchy bound.
  T bound(0);
  for (std::size_t i = 0; i < d; ++i) {
    const T r = abs_of(T(den[i] / den[d]));
    if (r > bound) bound = r;
  }
  bound = bound * T(129) / T(128) + T(1);
  const auto chain = sturm_chain(den);
  const T lo = -bound, hi = bound;
  const int vlo = sign_changes(chain, lo), vhi = sign_changes(chain, hi);
  if (vlo - vhi != static_cast<int>(d)) {
    throw ValidationError("not a valid string: Weyl function has complex or repeated poles");
  }
  std::vector<std::pair<T, T>> brackets;
  isolate(chain, lo, hi, vlo, vhi, brackets, 0);

  Poly<Real> dr, nr;
  for (const auto& c : den) dr.push_back(to_real(c));
  for (const auto& c : m.num) nr.push_back(to_real(c));
  const Poly<Real> ddr = pderiv(dr);
  std::vector<std::pair<Real, Real>> atoms;
  for (const auto& [a, b] : brackets) {
    Real lam;
    // Sturm counts roots in (a, b].
    if (peval(den, b) == 0) {
      lam = to_real(b);
    } else {
      lam = polish(dr, to_real(a), to_real(b), work);
    }
    if (lam == 0) throw ValidationError("Weyl function has a pole at 0");
    const Real gamma = -peval(nr, lam) / peval(ddr, lam);
    if (!(gamma > 0)) throw ValidationError("Herglotz violation: non-positive spectral mass");
    atoms.emplace_back(lam, gamma);
  }
  return finite_discrete_real(atoms);
}

template <class T>
PeakonProfile<T> profile_from_peakons(const std::vector<T>& xt, const std::vector<T>& omega) {
  if (xt.size() != omega.size()) throw ValidationError("positions and heights differ in length");
  PeakonProfile<T> p;
  p.finite = true;
  p.bound = "support";
  p.digits = current_digits();
  p.work_digits = current_digits();
  for (std::size_t n = 0; n < xt.size(); ++n) {
    if (!(xt[n] > 0) || (n > 0 && !(xt[n] > xt[n - 1]))) throw ValidationError("positions must increase");
    if (omega[n] == 0) throw ValidationError("heights must be non-zero");
    p.xt.push_back(xt[n]);
    if constexpr (is_exact_v<T>) {
      p.x.push_back(log(to_real(xt[n])));
    } else {
      p.x.push_back(log(xt[n]));
    }
    p.omega.push_back(omega[n]);
    p.upsilon.push_back(T(0));
    p.s_minus1 += omega[n] / xt[n];
    p.kappa.kappa.push_back(static_cast<int>(n));
  }
  p.kappa.N = static_cast<int>(xt.size()) + 1;
  p.kappa.finite = true;
  return p;
}

template <class T>
KreinLangerString<T> psi_map(const MomentTable<T>& table) {
  MomentTable<T> shifted = table;
  shifted.s[0] = T(0);
  const HankelGrid<T> grid = build_grid(shifted);
  const PeakonProfile<T> p = peakon_profile(grid);
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(table.work_digits);
  KreinLangerString<T> s;
  for (std::size_t n = 0; n < p.omega.size(); ++n) {
    s.xt.push_back(p.xt[n]);
    s.w.push_back(p.omega[n] / p.xt[n]);
    s.v.push_back(p.upsilon[n] / p.xt[n]);
  }
  return s;
}

DeterminacyReport determinacy(const StringGenerator& gen, std::size_t terms) {
  DeterminacyReport r;
  Real W(0);
  for (std::size_t n = 1; n <= terms; ++n) {
    const StringEntry e = gen.entry(n);
    W += e.w;
    r.hamburger_partial += e.gap + e.gap * W * W + e.v;
    r.stieltjes_partial += e.gap + e.w;
  }
  r.terms = terms;
  auto classify = [&](bool stieltjes) {
    const TailEstimate t = gen.tail(terms, stieltjes, W);
    if (!r.reason.empty()) r.reason += "; ";
    r.reason += t.reason;
    switch (t.kind) {
      case TailEstimate::Kind::Convergent: return Determinacy::Indeterminate;
      case TailEstimate::Kind::Divergent: return Determinacy::Determinate;
      default: break;
    }
    throw ComputationError("determinacy inconclusive: " + t.reason);
  };
  r.hamburger = classify(false);
  if (gen.stieltjes_applicable) r.stieltjes = classify(true);
  return r;
}

template <class T>
DeterminacyReport determinacy(const KreinLangerString<T>& s) {
  DeterminacyReport r;
  r.terms = s.size();
  r.hamburger = Determinacy::Determinate;
  r.stieltjes = Determinacy::Determinate;
  r.reason = "finite string";
  return r;
}

StringGenerator asc_string_generator(const Rational& a, const Rational& q) {
  if (!(a > 1 && a * q < 1 && q > 0)) throw ValidationError("al_salam_carlitz needs 1 < a < 1/q");
  StringGenerator g;
  g.stieltjes_applicable = true;
  const Real ar = to_real(a), qr = to_real(q);
  g.entry = [ar, qr](std::size_t n) {
    const std::size_t k = n - 1;
    const Real qq = q_pochhammer(qr, qr, k);
    StringEntry e;
    e.gap = pow(ar * qr, static_cast<long>(k)) / qq;
    e.w = qq / pow(ar, static_cast<long>(n));
    e.v = 0;
    return e;
  };
  g.tail = [ar, qr](std::size_t N, bool stieltjes, const Real&) {
    TailEstimate t;
    t.kind = TailEstimate::Kind::Convergent;
    const Real gaps = pow(ar * qr, static_cast<long>(N)) / (q_pochhammer_inf(qr, qr) * (1 - ar * qr));
    if (stieltjes) {
      t.bound = gaps + pow(ar, -static_cast<long>(N + 1)) / (1 - 1 / ar);
      t.reason = "Stieltjes tail bounded geometrically";
    } else {
      const Real wmax = 1 / (ar - 1);
      t.bound = gaps * (1 + wmax * wmax);
      t.reason = "Hamburger tail bounded geometrically";
    }
    return t;
  };
  return g;
}

StringGenerator laguerre_string_generator(const Rational& gamma, const Rational& alpha, unsigned digits) {
  auto cache = std::make_shared<KreinLangerString<Real>>();
  auto spec = std::make_shared<SpectralMeasureSpec>(laguerre(gamma, alpha));
  StringGenerator g;
  g.stieltjes_applicable = true;
  g.entry = [cache, spec, digits](std::size_t n) {
    if (cache->size() < n) {
      const int K = static_cast<int>(std::max<std::size_t>(2 * n, 8));
      *cache = psi_map(moments(*spec, Real(0), K, digits));
    }
    StringEntry e;
    e.gap = cache->gap(n);
    e.w = cache->w[n - 1];
    e.v = cache->v[n - 1];
    return e;
  };
  g.tail = [](std::size_t, bool, const Real&) {
    TailEstimate t;
    t.kind = TailEstimate::Kind::Divergent;
    t.reason = "Carleman: the weight has finite exponential moments, so sum s_{2n}^{-1/(2n)} diverges";
    return t;
  };
  return g;
}

template <class T>
std::vector<std::pair<T, T>> rho_plus_atoms(const std::vector<std::pair<T, T>>& atoms) {
  std::vector<std::pair<T, T>> out;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const T& lj = atoms[j].first;
    T prod(1);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i == j) continue;
      const T f = 1 - lj / atoms[i].first;
      if (f == 0) throw ComputationError("coincident eigenvalues in rho_plus");
      prod *= f;
    }
    const T wdot = -prod / lj;
    out.emplace_back(lj, T(1 / (lj * lj * wdot * wdot * atoms[j].second)));
  }
  return out;
}

RhoPlus rho_plus(const SpectralMeasureSpec& spec, std::size_t terms) {
  RhoPlus r;
  if (spec.kind == MeasureKind::FiniteDiscrete) {
    bool exact = true;
    for (const auto& a : spec.atoms) exact = exact && a.lambda_q && a.gamma_q;
    if (exact) {
      std::vector<std::pair<Rational, Rational>> in;
      for (const auto& a : spec.atoms) in.emplace_back(*a.lambda_q, *a.gamma_q);
      r.measure = finite_discrete(rho_plus_atoms(in));
    } else {
      std::vector<std::pair<Real, Real>> in;
      for (const auto& a : spec.atoms) in.emplace_back(a.lambda, a.gamma);
      r.measure = finite_discrete_real(rho_plus_atoms(in));
    }
    return r;
  }
  if (spec.kind != MeasureKind::AlSalamCarlitz) throw ValidationError("rho_plus needs a discrete spectrum");
  if (terms == 0) throw ValidationError("rho_plus of an infinite spectrum needs a term count");
  const Real a = to_real(spec.p1), q = to_real(spec.p2);
  // Atoms beyond `terms` still enter W; extend until their factors are below precision.
  const double qd = static_cast<double>(q), ad = static_cast<double>(a);
  const double lam_last = ad * std::pow(qd, -static_cast<double>(terms)) - 1;
  const double need = current_digits() + 5 + std::log10(lam_last / ((ad - 1) * (1 - qd)));
  const std::size_t extra = static_cast<std::size_t>(std::ceil(need / -std::log10(qd))) + 1;
  const std::vector<Atom> atoms = asc_atoms(spec.p1, spec.p2, terms + extra);
  std::vector<std::pair<Real, Real>> in;
  for (const auto& at : atoms) in.emplace_back(at.lambda, at.gamma);
  std::vector<std::pair<Real, Real>> plus = rho_plus_atoms(in);
  plus.resize(terms);
  r.measure = finite_discrete_real(plus);
  Real total(0);
  for (const auto& [l, g] : plus) total += g;
  // Geometric tail from the ratio of the last two masses.
  const Real last = plus.back().second;
  const Real ratio = terms >= 2 ? Real(last / plus[terms - 2].second) : Real(0);
  r.truncation_bound = ratio < 1 ? Real(last / (1 - ratio) / total) : Real(1);
  return r;
}

#define PEAKON_INSTANTIATE(T)                                                                     \
  template struct KreinLangerString<T>;                                                           \
  template struct RationalWeylFunction<T>;                                                        \
  template KreinLangerString<T> string_from_profile(const PeakonProfile<T>&);                     \
  template RationalWeylFunction<T> weyl_from_string(const KreinLangerString<T>&);                 \
  template SpectralMeasureSpec measure_from_weyl(const RationalWeylFunction<T>&, unsigned);       \
  template PeakonProfile<T> profile_from_peakons(const std::vector<T>&, const std::vector<T>&);   \
  template KreinLangerString<T> psi_map(const MomentTable<T>&);                                   \
  template DeterminacyReport determinacy(const KreinLangerString<T>&);                            \
  template std::vector<std::pair<T, T>> rho_plus_atoms(const std::vector<std::pair<T, T>>&);

PEAKON_INSTANTIATE(Real)
PEAKON_INSTANTIATE(Rational)

}  // namespace peakon
