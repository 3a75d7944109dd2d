#include "peakon/ortho.hpp"

#include <cmath>

namespace peakon {

std::vector<Real> OrthoPolySet::values(const Real& z) const {
  WorkingPrecision wp(work_digits);
  std::vector<Real> p;
  p.reserve(static_cast<std::size_t>(M) + 1);
  p.push_back(1 / sqrt(s0));
  for (int k = 0; k < M; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Real next = (z - a[ku]) * p[ku];
    if (k > 0) next -= b[ku - 1] * p[ku - 1];
    p.push_back(b[ku] == 0 ? next : Real(next / b[ku]));
  }
  return p;
}

void OrthoPolySet::values_and_derivatives(const Real& z, std::vector<Real>& p, std::vector<Real>& dp) const {
  WorkingPrecision wp(work_digits);
  p.assign(1, 1 / sqrt(s0));
  dp.assign(1, Real(0));
  for (int k = 0; k < M; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Real next = (z - a[ku]) * p[ku];
    Real dnext = p[ku] + (z - a[ku]) * dp[ku];
    if (k > 0) {
      next -= b[ku - 1] * p[ku - 1];
      dnext -= b[ku - 1] * dp[ku - 1];
    }
    if (b[ku] == 0) {
      p.push_back(next);
      dp.push_back(dnext);
    } else {
      p.push_back(next / b[ku]);
      dp.push_back(dnext / b[ku]);
    }
  }
}

void OrthoPolySet::scaled_value(const Real& z, int k, Real& q, Real& dq) const {
  if (k < 1 || k > M) throw ValidationError("scaled polynomial index out of range");
  std::vector<Real> p, dp;
  values_and_derivatives(z, p, dp);
  WorkingPrecision wp(work_digits);
  const auto ku = static_cast<std::size_t>(k);
  const Real& bk = b[ku - 1];
  q = bk == 0 ? p[ku] : Real(bk * p[ku]);
  dq = bk == 0 ? dp[ku] : Real(bk * dp[ku]);
}

namespace {

void fill_coefficients(OrthoPolySet& set, int coeff_max) {
  const int top = std::min(set.M, coeff_max);
  if (top < 0) return;
  set.coeffs.clear();
  set.coeffs.push_back({1 / sqrt(set.s0)});
  for (int k = 0; k < top; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const auto& pk = set.coeffs[ku];
    std::vector<Real> next(pk.size() + 1, Real(0));
    for (std::size_t j = 0; j < pk.size(); ++j) {
      next[j + 1] += pk[j];
      next[j] -= set.a[ku] * pk[j];
    }
    if (k > 0) {
      const auto& pm = set.coeffs[ku - 1];
      for (std::size_t j = 0; j < pm.size(); ++j) next[j] -= set.b[ku - 1] * pm[j];
    }
    if (set.b[ku] != 0) {
      for (auto& c : next) c /= set.b[ku];
    }
    set.coeffs.push_back(std::move(next));
  }
}

}  // namespace

OrthoPolySet orthopoly_from_moments(const MomentTable<Real>& table, int M, int coeff_max) {
  if (M < 0 || M > table.K) throw ValidationError("degree bound exceeds the moment table");
  if (table.support_size && static_cast<std::size_t>(M) > *table.support_size) {
    throw ValidationError("degree bound exceeds the number of atoms");
  }
  WorkingPrecision wp(table.work_digits);
  const int L = 2 * M + 1;  // s_0..s_{2M}
  std::vector<Real> prev(static_cast<std::size_t>(L), Real(0));
  std::vector<Real> cur(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) cur[static_cast<std::size_t>(l)] = rebase(table.at(l));
  if (!(cur[0] > 0)) throw ComputationError("Hankel positivity fails at k = 1");
  // A positive measure with exactly M atoms has Delta_{0,M+1} = 0.
  const bool exhausted = table.positive_support && table.support_size && *table.support_size == static_cast<std::size_t>(M);

  // Monic recurrence p_{k+1} = (z - alpha_k) p_k - beta_k p_{k-1}.
  std::vector<Real> alpha, beta;
  alpha.push_back(cur[1] / cur[0]);
  beta.push_back(cur[0]);
  for (int k = 1; k <= M; ++k) {
    std::vector<Real> next(static_cast<std::size_t>(L), Real(0));
    const auto km = static_cast<std::size_t>(k - 1);
    for (int l = k; l < L - k; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      next[lu] = cur[lu + 1] - alpha[km] * cur[lu];
      if (k > 1) next[lu] -= beta[km] * prev[lu];
    }
    const auto ku = static_cast<std::size_t>(k);
    if (k == M && exhausted) {
      beta.push_back(Real(0));
      break;
    }
    if (!(next[ku] > 0)) throw ComputationError("Hankel positivity fails at k = " + std::to_string(k + 1));
    beta.push_back(next[ku] / cur[km]);
    if (k < M) alpha.push_back(next[ku + 1] / next[ku] - cur[km + 1] / cur[km]);
    prev = std::move(cur);
    cur = std::move(next);
  }

  OrthoPolySet set;
  set.M = M;
  set.s0 = rebase(table.at(0));
  set.work_digits = table.work_digits;
  for (int k = 0; k < M; ++k) {
    set.a.push_back(alpha[static_cast<std::size_t>(k)]);
    set.b.push_back(sqrt(beta[static_cast<std::size_t>(k + 1)]));
  }
  fill_coefficients(set, coeff_max);
  return set;
}

OrthoPolySet orthopoly_from_params(const JacobiParams& params, const Real& s0, int M, int coeff_max) {
  if (M < 0 || static_cast<std::size_t>(M) > params.a.size() || static_cast<std::size_t>(M) > params.b.size()) {
    throw ValidationError("not enough Jacobi parameters");
  }
  OrthoPolySet set;
  set.M = M;
  set.work_digits = current_digits();
  set.s0 = rebase(s0);
  set.a.assign(params.a.begin(), params.a.begin() + M);
  set.b.assign(params.b.begin(), params.b.begin() + M);
  fill_coefficients(set, coeff_max);
  return set;
}

std::vector<Real> determinant_polynomial(const MomentTable<Real>& table, int k) {
  WorkingPrecision wp(table.work_digits);
  const Real norm = sqrt(hankel_det(table, 0, k) * hankel_det(table, 0, k + 1));
  std::vector<Real> out;
  for (int j = 0; j <= k; ++j) {
    std::vector<std::vector<Real>> m;
    for (int i = 0; i < k; ++i) {
      std::vector<Real> row;
      for (int c = 0; c <= k; ++c)
        if (c != j) row.push_back(table.at(i + c));
      m.push_back(std::move(row));
    }
    Real cof = dense_det(std::move(m));
    if ((k + j) % 2) cof = -cof;
    out.push_back(cof / norm);
  }
  return out;
}

JacobiParams jacobi_params(const SpectralMeasureSpec& spec, int M) {
  JacobiParams jp;
  switch (spec.kind) {
    case MeasureKind::Laguerre: {
      const Real g = to_real(spec.p1), al = to_real(spec.p2);
      for (int n = 0; n < M; ++n) {
        jp.a.push_back(2 * n + 1 + g + al);
        jp.b.push_back(sqrt((n + 1) * (n + g + 1)));
      }
      return jp;
    }
    case MeasureKind::Jacobi: {
      // Orthonormal Jacobi recurrence on [-1, 1] mapped by y = 2(lambda - alpha) - 1.
      const Real a = to_real(spec.p1), b = to_real(spec.p2), al = to_real(spec.p3);
      for (int n = 0; n < M; ++n) {
        const Real s = 2 * n + a + b;
        Real diag;
        if (n == 0) {
          diag = (b - a) / (a + b + 2);
        } else {
          diag = (b * b - a * a) / (s * (s + 2));
        }
        Real off;
        if (n == 0) {
          off = 2 / (a + b + 2) * sqrt((a + 1) * (b + 1) / (a + b + 3));
        } else {
          off = 2 / (s + 2) * sqrt((n + 1) * (n + a + 1) * (n + b + 1) * (n + a + b + 1) / ((s + 1) * (s + 3)));
        }
        jp.a.push_back(al + (1 + diag) / 2);
        jp.b.push_back(off / 2);
      }
      return jp;
    }
    case MeasureKind::AlSalamCarlitz: {
      const Real a = to_real(spec.p1), q = to_real(spec.p2);
      for (int n = 0; n < M; ++n) {
        jp.a.push_back((a + 1) * pow(q, -n) - 1);
        jp.b.push_back(sqrt(a * (1 - pow(q, n + 1))) / pow(q, Real(n) + Real(1) / 2));
      }
      return jp;
    }
    case MeasureKind::StieltjesWigert: {
      const Real kap = to_real(spec.p1), al = to_real(spec.p2);
      const Real q = exp(-1 / (2 * kap * kap));
      for (int n = 0; n < M; ++n) {
        jp.a.push_back(al + pow(q, -Real(4 * n + 3) / 2) + pow(q, -Real(4 * n + 1) / 2) - pow(q, -Real(2 * n + 1) / 2));
        jp.b.push_back(pow(q, -2 * (n + 1)) * sqrt(1 - pow(q, n + 1)));
      }
      return jp;
    }
    default:
      break;
  }
  throw ValidationError("no closed-form Jacobi parameters for " + kind_name(spec.kind));
}

std::vector<Real> moments_from_params(const JacobiParams& params, const Real& s0, int kmax) {
  const std::size_t n = std::min(params.a.size(), params.b.size() + 1);
  if (kmax > static_cast<int>(2 * n) - 1) throw ValidationError("not enough Jacobi parameters");
  std::vector<Real> v(n, Real(0));
  v[0] = 1;
  std::vector<Real> out{s0};
  for (int k = 1; k <= kmax; ++k) {
    std::vector<Real> w(n, Real(0));
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = params.a[i] * v[i];
      if (i > 0) w[i] += params.b[i - 1] * v[i - 1];
      if (i + 1 < n) w[i] += params.b[i] * v[i + 1];
    }
    v = std::move(w);
    out.push_back(s0 * v[0]);
  }
  return out;
}

Real CdForms::spread() const {
  return max(rel_diff(sum, determinant), max(rel_diff(sum, confluent), rel_diff(determinant, confluent)));
}

CdForms cd_kernel(const OrthoPolySet& polys, const MomentTable<Real>& table, const Real& z, int n) {
  if (n + 1 > polys.M) throw ValidationError("cd kernel needs P_{n+1}");
  WorkingPrecision wp(polys.work_digits);
  std::vector<Real> p, dp;
  polys.values_and_derivatives(z, p, dp);
  CdForms f;
  for (int k = 0; k <= n; ++k) f.sum += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
  const auto nu = static_cast<std::size_t>(n);
  Real q, dq;
  polys.scaled_value(z, n + 1, q, dq);
  f.confluent = dq * p[nu] - q * dp[nu];

  std::vector<std::vector<Real>> m(nu + 2, std::vector<Real>(nu + 2));
  Real zp(1);
  m[0][0] = 0;
  for (std::size_t i = 0; i <= nu; ++i) {
    m[0][i + 1] = zp;
    m[i + 1][0] = zp;
    zp *= z;
    for (std::size_t j = 0; j <= nu; ++j) m[i + 1][j + 1] = rebase(table.at(static_cast<int>(i + j)));
  }
  f.determinant = -dense_det(std::move(m)) / hankel_det(table, 0, n + 1);
  return f;
}

PeakonProfile<Real> peakons_via_op(const OrthoPolySet& polys, int n, const Real& t) {
  if (n < 1 || n > polys.M) throw ValidationError("peakon count exceeds the polynomial degree bound");
  WorkingPrecision wp(polys.work_digits);
  std::vector<Real> p, dp;
  polys.values_and_derivatives(Real(0), p, dp);
  PeakonProfile<Real> prof;
  prof.t = t;
  prof.work_digits = polys.work_digits;
  prof.digits = polys.work_digits;
  prof.bound = "requested";
  prof.s_minus1 = 0;
  for (int k = 1; k <= n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (p[ku] == 0) throw ComputationError("P_" + std::to_string(k) + "(0) vanishes");
    Real q, dq;
    polys.scaled_value(Real(0), k, q, dq);
    const Real xt = dq * p[ku - 1] - q * dp[ku - 1];
    prof.xt.push_back(xt);
    prof.x.push_back(log(xt));
    prof.omega.push_back(dp[ku - 1] / p[ku - 1] - dq / q);
    prof.upsilon.push_back(Real(0));
    prof.kappa.kappa.push_back(k - 1);
  }
  prof.kappa.N = n;
  prof.kappa.top = n;
  return prof;
}

std::vector<Real> positions_cd_sum(const OrthoPolySet& polys, int n) {
  if (n < 1 || n - 1 > polys.M) throw ValidationError("position count exceeds the polynomial degree bound");
  WorkingPrecision wp(polys.work_digits);
  const std::vector<Real> p = polys.values(Real(0));
  std::vector<Real> out;
  Real acc(0);
  for (int k = 0; k < n; ++k) {
    acc += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
    out.push_back(log(acc));
  }
  return out;
}

}  // namespace peakon
