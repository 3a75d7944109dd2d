#include "peakon/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peakon/quadrature.hpp"

namespace peakon {

std::string kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::FiniteDiscrete: return "discrete";
    case MeasureKind::AlSalamCarlitz: return "al_salam_carlitz";
    case MeasureKind::Laguerre: return "laguerre";
    case MeasureKind::Jacobi: return "jacobi";
    case MeasureKind::StieltjesWigert: return "stieltjes_wigert";
  }
  return "unknown";
}

bool SpectralMeasureSpec::positive_support() const {
  if (kind != MeasureKind::FiniteDiscrete) return true;
  return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.lambda > 0; });
}

SpectralMeasureSpec finite_discrete(const std::vector<std::pair<Rational, Rational>>& points) {
  SpectralMeasureSpec spec;
  spec.kind = MeasureKind::FiniteDiscrete;
  for (const auto& [l, g] : points) {
    Atom a;
    a.lambda = to_real(l);
    a.gamma = to_real(g);
    a.lambda_q = l;
    a.gamma_q = g;
    spec.atoms.push_back(a);
  }
  validate(spec);
  return spec;
}

SpectralMeasureSpec finite_discrete_real(const std::vector<std::pair<Real, Real>>& points) {
  SpectralMeasureSpec spec;
  spec.kind = MeasureKind::FiniteDiscrete;
  for (const auto& [l, g] : points) spec.atoms.push_back(Atom{l, g, std::nullopt, std::nullopt});
  validate(spec);
  return spec;
}

namespace {

SpectralMeasureSpec named(MeasureKind kind, const Rational& p1, const Rational& p2, const Rational& p3) {
  SpectralMeasureSpec spec;
  spec.kind = kind;
  spec.p1 = p1;
  spec.p2 = p2;
  spec.p3 = p3;
  validate(spec);
  return spec;
}

Real total_time(const SpectralMeasureSpec& spec, const Real& t) { return rebase(spec.time_offset) + rebase(t); }

}  // namespace

SpectralMeasureSpec laguerre(const Rational& gamma, const Rational& alpha) {
  return named(MeasureKind::Laguerre, gamma, alpha, 0);
}

SpectralMeasureSpec jacobi(const Rational& a, const Rational& b, const Rational& alpha) {
  return named(MeasureKind::Jacobi, a, b, alpha);
}

SpectralMeasureSpec stieltjes_wigert(const Rational& kappa, const Rational& alpha) {
  return named(MeasureKind::StieltjesWigert, kappa, alpha, 0);
}

SpectralMeasureSpec al_salam_carlitz(const Rational& a, const Rational& q) {
  return named(MeasureKind::AlSalamCarlitz, a, q, 0);
}

void validate(const SpectralMeasureSpec& spec) {
  switch (spec.kind) {
    case MeasureKind::FiniteDiscrete: {
      for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
        const Atom& a = spec.atoms[i];
        if (a.lambda == 0) throw ValidationError("eigenvalue 0 is not allowed");
        if (!(a.gamma > 0)) throw ValidationError("masses must be positive");
        for (std::size_t j = 0; j < i; ++j) {
          const bool same = (a.lambda_q && spec.atoms[j].lambda_q) ? *a.lambda_q == *spec.atoms[j].lambda_q
                                                                    : a.lambda == spec.atoms[j].lambda;
          if (same) throw ValidationError("eigenvalues must be distinct");
        }
      }
      break;
    }
    case MeasureKind::AlSalamCarlitz:
      if (!(spec.p2 > 0 && spec.p2 < 1)) throw ValidationError("al_salam_carlitz needs 0 < q < 1");
      if (!(spec.p1 > 1 && spec.p1 * spec.p2 < 1)) throw ValidationError("al_salam_carlitz needs 1 < a < 1/q");
      break;
    case MeasureKind::Laguerre:
      if (!(spec.p1 > -1)) throw ValidationError("laguerre needs gamma > -1");
      if (!(spec.p2 > 0)) throw ValidationError("laguerre needs alpha > 0");
      break;
    case MeasureKind::Jacobi:
      if (!(spec.p1 > -1 && spec.p2 > -1)) throw ValidationError("jacobi needs a, b > -1");
      if (!(spec.p3 > 0)) throw ValidationError("jacobi needs alpha > 0");
      break;
    case MeasureKind::StieltjesWigert:
      if (!(spec.p1 > 0)) throw ValidationError("stieltjes_wigert needs kappa > 0");
      if (spec.p2 < 0) throw ValidationError("stieltjes_wigert needs alpha >= 0");
      break;
  }
}

SpectralMeasureSpec evolve(const SpectralMeasureSpec& spec, const Real& t) {
  SpectralMeasureSpec out = spec;
  out.time_offset = spec.time_offset + t;
  return out;
}

template <class T>
MomentTable<T> table_from_values(std::vector<T> values, unsigned digits, bool positive_support,
                                 std::optional<std::size_t> support_size) {
  if (values.size() < 2) throw ValidationError("moment table needs s_{-1} and s_0");
  MomentTable<T> table;
  table.K = static_cast<int>((values.size() - 2) / 2);
  values.resize(static_cast<std::size_t>(2 * table.K + 2));
  table.s = std::move(values);
  table.digits = digits;
  table.work_digits = digits;
  table.positive_support = positive_support;
  table.support_size = support_size;
  return table;
}

template MomentTable<Real> table_from_values(std::vector<Real>, unsigned, bool, std::optional<std::size_t>);
template MomentTable<Rational> table_from_values(std::vector<Rational>, unsigned, bool,
                                                 std::optional<std::size_t>);

Real q_pochhammer(const Real& x, const Real& q, std::size_t n) {
  Real r(1), qj(1);
  for (std::size_t j = 0; j < n; ++j) {
    r *= 1 - x * qj;
    qj *= q;
  }
  return r;
}

Real q_pochhammer_inf(const Real& x, const Real& q) {
  const Real eps = pow10_neg(current_digits() + 5);
  Real r(1), term = x;
  for (std::size_t j = 0; j < 1000000; ++j) {
    r *= 1 - term;
    term *= q;
    if (abs(term) < eps) return r * (1 - term);
  }
  throw ComputationError("q-Pochhammer product did not converge");
}

std::vector<Atom> asc_atoms(const Rational& a, const Rational& q, std::size_t count) {
  const Real ar = to_real(a), qr = to_real(q);
  std::vector<Atom> atoms;
  Real g = q_pochhammer_inf(qr / ar, qr);
  Real qinv_n(1);
  Real qn1 = qr;  // q^{n+1}
  Real q2n1 = qr;  // q^{2n+1}
  for (std::size_t n = 0; n < count; ++n) {
    atoms.push_back(Atom{ar * qinv_n - 1, g, std::nullopt, std::nullopt});
    g *= q2n1 / (ar * (1 - qn1 / ar) * (1 - qn1));
    qinv_n /= qr;
    qn1 *= qr;
    q2n1 *= qr * qr;
  }
  return atoms;
}

namespace {

// Sum over atoms for k = -1..kmax, with adaptive truncation for generators.
void discrete_sums(const SpectralMeasureSpec& spec, const Real& T, int kmax, unsigned digits,
                   std::vector<Real>& s, TruncationReport& report) {
  const std::size_t dim = static_cast<std::size_t>(kmax + 2);
  s.assign(dim, Real(0));
  std::vector<Real> term(dim), prev(dim);
  auto add_atom = [&](const Real& lambda, const Real& gamma) {
    Real p = gamma * exp(-T / (2 * lambda)) / lambda;
    for (std::size_t i = 0; i < dim; ++i) {
      term[i] = p;
      s[i] += p;
      p *= lambda;
    }
  };
  if (spec.kind == MeasureKind::FiniteDiscrete) {
    for (const Atom& a : spec.atoms) add_atom(rebase(a.lambda), rebase(a.gamma));
    report.terms = spec.atoms.size();
    report.tail_bound = 0;
    return;
  }

  const Real eps = pow10_neg(digits + 10);
  const Real ar = to_real(spec.p1), qr = to_real(spec.p2);
  Real g = q_pochhammer_inf(qr / ar, qr);
  Real lambda = ar - 1;
  Real qn1 = qr, q2n1 = qr;
  const std::size_t cap = spec.fixed_terms > 0 ? spec.fixed_terms : 200000;
  for (std::size_t n = 0; n < cap; ++n) {
    prev = term;
    add_atom(lambda, g);
    report.terms = n + 1;
    g *= q2n1 / (ar * (1 - qn1 / ar) * (1 - qn1));
    lambda = (lambda + 1) / qr - 1;
    qn1 *= qr;
    q2n1 *= qr * qr;
    if (n == 0) continue;
    // Past the peak every term decays at least geometrically with ratio r.
    bool decaying = true;
    Real tail(0);
    for (std::size_t i = 0; i < dim && decaying; ++i) {
      Real r = term[i] / prev[i];
      if (!(r < Real("0.5"))) {
        decaying = false;
        break;
      }
      tail = max(tail, term[i] * r / (1 - r) / s[i]);
    }
    report.tail_bound = decaying ? tail : Real(1);
    if (spec.fixed_terms == 0 && decaying && tail < eps) return;
  }
  if (spec.fixed_terms == 0) throw TruncationError("infinite discrete sum failed the tail-bound test");
  if (!(report.tail_bound < pow10_neg(digits))) {
    throw TruncationError("fixed truncation leaves a tail above the requested accuracy");
  }
}

// Double precision scan for the range carrying the integrand mass of
// lambda^k w(lambda) e^{-T/(2 lambda)}, in the variable x = lambda - alpha.
double laguerre_cutoff(double gam, double alpha, double T, int kmin, int kmax, unsigned digits) {
  auto g = [&](double x, int k) {
    return gam * std::log(x) - x + k * std::log(alpha + x) - T / (2 * (alpha + x));
  };
  const double drop = (digits + 30) * std::log(10.0);
  double X = 1.0;
  for (int k : {kmin, kmax}) {
    double gmax = -std::numeric_limits<double>::max(), argmax = 1e-12;
    for (double x = 1e-12; x < 1e7; x *= 1.01) {
      double v = g(x, k);
      if (v > gmax) {
        gmax = v;
        argmax = x;
      }
    }
    double x = std::max(argmax, 1.0);
    while (g(x, k) > gmax - drop) x *= 1.01;
    X = std::max(X, x);
  }
  return X;
}

std::pair<double, double> sw_range(double kappa, double alpha, double T, int kmin, int kmax, unsigned digits) {
  auto g = [&](double y, int k) {
    double lam = alpha + std::exp(y);
    return -kappa * kappa * y * y + y + k * std::log(lam) - T / (2 * lam);
  };
  const double drop = (digits + 30) * std::log(10.0);
  const double span = 50.0 + (std::abs(kmax) + 2) / (kappa * kappa) + std::sqrt(drop) / kappa * 2;
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (int k : {kmin, kmax}) {
    double gmax = -std::numeric_limits<double>::max();
    const double step = std::min(0.01, 0.01 / kappa);
    for (double y = -span; y < span; y += step) gmax = std::max(gmax, g(y, k));
    for (double y = -span; y < span; y += step) {
      if (g(y, k) > gmax - drop) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
  }
  return {lo - 1.0, hi + 1.0};
}

}  // namespace

namespace {

// Integration variable, panels and density (including the flow factor and
// the Jacobian) for a named weight.
struct WeightModel {
  std::vector<Real> edges;
  std::function<void(const Real& x, const Real& dl, const Real& dr, Real& lambda, Real& density)> eval;
};

WeightModel weight_model(const SpectralMeasureSpec& spec, const Real& T, int kmin, int kmax, unsigned digits) {
  const double Td = static_cast<double>(T);
  const auto h = spec.weight_factor;
  WeightModel m;
  switch (spec.kind) {
    case MeasureKind::Laguerre: {
      const Real gam = to_real(spec.p1), alpha = to_real(spec.p2);
      const Real norm = gamma_fn(gam + 1);
      const Real X(laguerre_cutoff(static_cast<double>(gam), static_cast<double>(alpha), Td, kmin, kmax, digits));
      Real w0("0.125");
      if (T < 0) w0 = min(w0, 2 * alpha * alpha / abs(T));
      m.edges = graded_edges(alpha, alpha + X, w0 / X, Real(0));
      m.eval = [=](const Real& x, const Real& dl, const Real&, Real& lambda, Real& density) {
        lambda = x;
        density = pow(dl, gam) * exp(-dl - T / (2 * lambda)) / norm;
        if (h) density *= h(lambda);
      };
      return m;
    }
    case MeasureKind::Jacobi: {
      const Real a = to_real(spec.p1), b = to_real(spec.p2), alpha = to_real(spec.p3);
      const Real beta = alpha + 1;
      Real wl("0.125"), wr("0.125");
      if (T < 0) wl = min(wl, 2 * alpha * alpha / abs(T));
      if (T > 0) wr = min(wr, 2 * beta * beta / T);
      m.edges = graded_edges(alpha, beta, wl, wr);
      m.eval = [=](const Real& x, const Real& dl, const Real& dr, Real& lambda, Real& density) {
        lambda = x;
        density = pow(dl, b) * pow(dr, a) * exp(-T / (2 * lambda));
        if (h) density *= h(lambda);
      };
      return m;
    }
    case MeasureKind::StieltjesWigert: {
      const Real kappa = to_real(spec.p1), alpha = to_real(spec.p2);
      if (alpha == 0 && T < 0) throw ValidationError("stieltjes_wigert with alpha = 0 has no moments for t < 0");
      const Real c = kappa / sqrt(pi());
      auto [lo, hi] = sw_range(static_cast<double>(kappa), static_cast<double>(alpha), Td, kmin, kmax, digits);
      const double width = std::max(0.25, 1.0 / static_cast<double>(kappa));
      const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
      for (int i = 0; i <= panels; ++i) m.edges.push_back(Real(lo) + (Real(hi) - Real(lo)) * i / panels);
      m.eval = [=](const Real& y, const Real&, const Real&, Real& lambda, Real& density) {
        Real ey = exp(y);
        lambda = alpha + ey;
        density = c * exp(-kappa * kappa * y * y - T / (2 * lambda)) * ey;
        if (h) density *= h(lambda);
      };
      return m;
    }
    default:
      break;
  }
  throw ValidationError("quadrature needs a named weight");
}

}  // namespace

std::vector<Real> quadrature_moments(const SpectralMeasureSpec& spec, const Real& t, int kmin, int kmax,
                                     unsigned digits) {
  WorkingPrecision wp(digits);
  const Real T = total_time(spec, t);
  const std::size_t dim = static_cast<std::size_t>(kmax - kmin + 1);
  const Real tol = pow10_neg(static_cast<double>(digits) - 8);
  WeightModel model = weight_model(spec, T, kmin, kmax, digits);
  VecIntegrand f = [&](const Real& x, const Real& dl, const Real& dr, std::vector<Real>& out) {
    Real lambda, density;
    model.eval(x, dl, dr, lambda, density);
    Real p = density * pow(lambda, kmin);
    for (std::size_t i = 0; i < dim; ++i) {
      out[i] = p;
      p *= lambda;
    }
  };
  return integrate_panels(f, model.edges, dim, tol).value;
}

std::vector<Atom> discretize(const SpectralMeasureSpec& spec, const Real& t, unsigned digits, int level) {
  validate(spec);
  WorkingPrecision wp(digits);
  const Real T = total_time(spec, t);
  if (spec.is_discrete()) {
    MomentTable<Real> probe = moments(spec, t, 0, digits);
    std::vector<Atom> atoms = spec.kind == MeasureKind::FiniteDiscrete
                                  ? spec.atoms
                                  : asc_atoms(spec.p1, spec.p2, probe.truncation.terms);
    for (Atom& a : atoms) {
      a.lambda = rebase(a.lambda);
      a.gamma = rebase(a.gamma) * exp(-T / (2 * a.lambda));
    }
    return atoms;
  }
  WeightModel model = weight_model(spec, T, -1, 4, digits);
  std::vector<Atom> atoms;
  for (std::size_t p = 0; p + 1 < model.edges.size(); ++p) {
    const Real off_l = model.edges[p] - model.edges.front();
    const Real off_r = model.edges.back() - model.edges[p + 1];
    for (const QuadNode& n : tanh_sinh_rule(model.edges[p], model.edges[p + 1], level)) {
      Real lambda, density;
      model.eval(n.x, off_l + n.dl, off_r + n.dr, lambda, density);
      if (density * n.w == 0) continue;
      atoms.push_back(Atom{lambda, density * n.w, std::nullopt, std::nullopt});
    }
  }
  return atoms;
}

namespace {

// Linear recurrence for k >= 2 seeded by s_{-1}, s_0, s_1.
std::vector<Real> run_recurrence(const SpectralMeasureSpec& spec, const Real& T, const Real& sm1, const Real& s0,
                                 const Real& s1, int kmax) {
  std::vector<Real> s(static_cast<std::size_t>(kmax + 2));
  s[0] = sm1;
  s[1] = s0;
  if (kmax >= 1) s[2] = s1;
  const Real half_t = T / 2;
  if (spec.kind == MeasureKind::Laguerre) {
    const Real gam = to_real(spec.p1), alpha = to_real(spec.p2);
    for (int m = 1; m < kmax; ++m) {
      const std::size_t i = static_cast<std::size_t>(m + 1);
      s[i + 1] = (m + gam + 1 + alpha) * s[i] + (half_t - m * alpha) * s[i - 1] - alpha * half_t * s[i - 2];
    }
  } else {
    const Real a = to_real(spec.p1), b = to_real(spec.p2), alpha = to_real(spec.p3);
    const Real beta = alpha + 1;
    for (int m = 1; m < kmax; ++m) {
      const std::size_t i = static_cast<std::size_t>(m + 1);
      Real c0 = m * (alpha + beta) + (b + 1) * beta + (a + 1) * alpha - half_t;
      Real c1 = half_t * (alpha + beta) - m * alpha * beta;
      Real c2 = half_t * alpha * beta;
      s[i + 1] = (c0 * s[i] + c1 * s[i - 1] - c2 * s[i - 2]) / (m + a + b + 2);
    }
  }
  return s;
}

constexpr int kValidateOrder = 10;

}  // namespace

namespace {

// Decimal digits separating the flow factors e^{-T/(2 lambda)} of the K+1
// atoms that dominate the Hankel determinants up to order K.
unsigned flow_spread_digits(const SpectralMeasureSpec& spec, double T, int K) {
  if (T == 0 || !spec.is_discrete()) return 0;
  std::vector<double> r;
  if (spec.kind == MeasureKind::FiniteDiscrete) {
    for (const Atom& a : spec.atoms) r.push_back(-T / (2 * static_cast<double>(a.lambda)));
  } else {
    const double a = static_cast<double>(spec.p1), q = static_cast<double>(spec.p2);
    for (int n = 0; n <= K; ++n) r.push_back(-T / (2 * (a * std::pow(q, -n) - 1)));
  }
  std::sort(r.begin(), r.end(), std::greater<>());
  const std::size_t last = std::min(r.size() - 1, static_cast<std::size_t>(std::max(K, 0)));
  const double loss = r[0] - r[last];
  return static_cast<unsigned>(std::ceil(loss / std::log(10.0)));
}

}  // namespace

unsigned default_guard(const SpectralMeasureSpec& spec, int K, const Real& t) {
  const unsigned k = static_cast<unsigned>(std::max(K, 0));
  const double T = static_cast<double>(spec.time_offset + t);
  const unsigned spread = flow_spread_digits(spec, T, K);
  if (spread > 0) return 20 + k + spread;
  switch (spec.kind) {
    case MeasureKind::Laguerre: return 20 + k;
    case MeasureKind::Jacobi: return 30 + (3 * k + 1) / 2;
    case MeasureKind::AlSalamCarlitz:
    case MeasureKind::StieltjesWigert: return 20 + std::min(k / 2, 40u);
    case MeasureKind::FiniteDiscrete: return 20 + k;
  }
  return 20 + k;
}

MomentTable<Real> moments(const SpectralMeasureSpec& spec, const Real& t, int K, unsigned digits,
                          const MomentOptions& opts) {
  validate(spec);
  if (K < 0) throw ValidationError("K must be non-negative");
  if (digits < 30) throw ValidationError("digits must be at least 30");
  const unsigned work = digits + opts.guard_digits.value_or(default_guard(spec, K, t));
  const int kmax = 2 * K;

  MomentTable<Real> table;
  table.K = K;
  table.digits = digits;
  table.work_digits = work;
  table.positive_support = spec.positive_support();
  {
    WorkingPrecision wp(work);
    table.t = rebase(t);
  }

  if (spec.is_discrete()) {
    WorkingPrecision wp(work);
    const Real T = total_time(spec, t);
    discrete_sums(spec, T, kmax, work, table.s, table.truncation);
    if (spec.kind == MeasureKind::FiniteDiscrete) table.support_size = spec.atoms.size();
    return table;
  }

  WorkingPrecision wp(work);
  const Real T = total_time(spec, t);

  if (spec.kind == MeasureKind::StieltjesWigert && !spec.weight_factor && T == 0) {
    // Log-normal moments in closed form, shifted binomially when alpha > 0.
    const Real kappa = to_real(spec.p1), alpha = to_real(spec.p2);
    const Real quarter = 1 / (4 * kappa * kappa);
    std::vector<Real> m0(static_cast<std::size_t>(kmax + 1));
    for (int j = 0; j <= kmax; ++j) m0[static_cast<std::size_t>(j)] = exp(quarter * (j + 1) * (j + 1));
    table.s.assign(static_cast<std::size_t>(kmax + 2), Real(0));
    if (alpha == 0) {
      table.s[0] = 1;
    } else {
      table.s[0] = quadrature_moments(spec, t, -1, -1, work + 10)[0];
    }
    for (int k = 0; k <= kmax; ++k) {
      Real acc(0), binom(1), apow(1);
      for (int j = k; j >= 0; --j) {
        acc += binom * apow * m0[static_cast<std::size_t>(j)];
        binom = binom * j / (k - j + 1);
        apow *= alpha;
      }
      table.s[static_cast<std::size_t>(k + 1)] = acc;
    }
    for (auto& v : table.s) v = rebase(v);
    return table;
  }

  const bool recurrence_ok = !opts.quadrature_only && !spec.weight_factor &&
                             (spec.kind == MeasureKind::Laguerre || spec.kind == MeasureKind::Jacobi) &&
                             kmax > kValidateOrder;
  if (!recurrence_ok) {
    auto q = quadrature_moments(spec, t, -1, kmax, work + 10);
    table.s.clear();
    for (auto& v : q) table.s.push_back(rebase(v));
    return table;
  }

  unsigned prec = work + 10;
  for (int attempt = 0; attempt < 4; ++attempt) {
    WorkingPrecision inner(prec);
    const Real Ti = total_time(spec, t);
    auto q = quadrature_moments(spec, t, -1, kValidateOrder, prec);
    auto s = run_recurrence(spec, Ti, q[0], q[1], q[2], kmax);
    // Seed perturbation estimates how much the recurrence amplifies errors.
    const Real delta = pow10_neg(prec / 2.0);
    auto sp = run_recurrence(spec, Ti, q[0] * (1 + delta), q[1] * (1 - delta * Real("0.7")),
                             q[2] * (1 + delta * Real("0.4")), kmax);
    double amp = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      amp = std::max(amp, log10_abs(Real((sp[i] - s[i]) / s[i])) + prec / 2.0);
    }
    const unsigned needed = work + 10 + static_cast<unsigned>(std::max(0.0, std::ceil(amp)));
    if (needed > prec) {
      prec = needed + 10;
      continue;
    }
    const Real vtol = pow10_neg(static_cast<double>(digits) - 20);
    for (int k = -1; k <= kValidateOrder; ++k) {
      const std::size_t i = static_cast<std::size_t>(k + 1);
      if (rel_diff(s[i], q[i]) > vtol) {
        throw PrecisionError("moment recurrence disagrees with quadrature at k = " + std::to_string(k),
                             2 * digits);
      }
    }
    WorkingPrecision outer(work);
    table.s.clear();
    for (auto& v : s) table.s.push_back(rebase(v));
    return table;
  }
  throw PrecisionError("moment recurrence needs more precision than the escalation budget", 2 * prec);
}

MomentTable<Rational> exact_moments(const SpectralMeasureSpec& spec, int K) {
  if (spec.kind != MeasureKind::FiniteDiscrete || spec.time_offset != 0) {
    throw ValidationError("exact moments need finite rational data at t = 0");
  }
  std::vector<Rational> s(static_cast<std::size_t>(2 * K + 2), Rational(0));
  for (const Atom& a : spec.atoms) {
    if (!a.lambda_q || !a.gamma_q) throw ValidationError("exact moments need rational atoms");
    Rational p = *a.gamma_q / *a.lambda_q;
    for (auto& v : s) {
      v += p;
      p *= *a.lambda_q;
    }
  }
  auto table = table_from_values<Rational>(std::move(s), 0, spec.positive_support(), spec.atoms.size());
  table.K = K;
  return table;
}

}  // namespace peakon
