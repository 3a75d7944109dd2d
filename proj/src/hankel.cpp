#include "peakon/hankel.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace peakon {

int delta_limit(int l, int K) {
  // Delta_{l,k} reads s_{l+2k-2}.
  int k = (2 * K + 2 - l) / 2;
  return std::max(k, 0);
}

int gamma_limit(int l, int K) {
  // Gamma_{l,k} reads s_{l+2k-1}.
  int k = (2 * K + 1 - l) / 2;
  return std::max(k, 0);
}

template <class T>
bool HankelGrid<T>::has_delta(int l, int k) const {
  if (l < -2 || l > 3 || k < 0) return false;
  return k < static_cast<int>(delta[static_cast<std::size_t>(l + 2)].size());
}

template <class T>
bool HankelGrid<T>::has_gamma(int l, int k) const {
  if (l < -1 || l > 1 || k < 0) return false;
  return k < static_cast<int>(gamma[static_cast<std::size_t>(l + 1)].size());
}

template <class T>
const T& HankelGrid<T>::d(int l, int k) const {
  if (!has_delta(l, k)) {
    throw ComputationError("Delta_{" + std::to_string(l) + "," + std::to_string(k) + "} is not available");
  }
  return delta[static_cast<std::size_t>(l + 2)][static_cast<std::size_t>(k)];
}

template <class T>
const T& HankelGrid<T>::g(int l, int k) const {
  if (!has_gamma(l, k)) {
    throw ComputationError("Gamma_{" + std::to_string(l) + "," + std::to_string(k) + "} is not available");
  }
  return gamma[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(k)];
}

template <class T>
Real HankelGrid<T>::tau(int k) const {
  if constexpr (is_exact_v<T>) {
    (void)k;
    return Real(0);
  } else {
    WorkingPrecision wp(table.work_digits);
    Real scale = sqrt(abs(d(0, k) * d(2, k)));
    return scale * pow10_neg(table.digits / 2.0);
  }
}

template <class T>
bool HankelGrid<T>::is_zero(int l, int k) const {
  const T& v = d(l, k);
  if constexpr (is_exact_v<T>) {
    return v == 0;
  } else {
    if (v == 0) return true;
    if (l != 1) return false;
    return abs(v) <= tau(k);
  }
}

template <class T>
T dense_det(std::vector<std::vector<T>> m) {
  const std::size_t n = m.size();
  if (n == 0) return T(1);
  if constexpr (is_exact_v<T>) {
    // Fraction-free elimination; the divisions by the previous pivot are exact.
    T prev(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m[k][k] == 0) {
        std::size_t r = k + 1;
        while (r < n && m[r][k] == 0) ++r;
        if (r == n) return T(0);
        std::swap(m[k], m[r]);
        negate = !negate;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
        }
      }
      prev = m[k][k];
    }
    return negate ? T(-m[n - 1][n - 1]) : m[n - 1][n - 1];
  } else {
    T det(1);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (abs(m[i][k]) > abs(m[p][k])) p = i;
      }
      if (m[p][k] == 0) return T(0);
      if (p != k) {
        std::swap(m[p], m[k]);
        det = -det;
      }
      det *= m[k][k];
      for (std::size_t i = k + 1; i < n; ++i) {
        T f = m[i][k] / m[k][k];
        for (std::size_t j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
      }
    }
    return det;
  }
}

template <class T>
T hankel_det(const MomentTable<T>& table, int l, int k) {
  if (k == 0) return T(1);
  std::vector<std::vector<T>> m(static_cast<std::size_t>(k), std::vector<T>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[i][j] = table.at(l + i + j);
  return dense_det(std::move(m));
}

template <class T>
T gamma_det(const MomentTable<T>& table, int l, int k) {
  if (k == 0) return T(0);
  std::vector<std::vector<T>> m;
  for (int i = 0; i <= k; ++i) {
    if (i == 1) continue;
    std::vector<T> row;
    for (int j = 0; j < k; ++j) row.push_back(table.at(l + i + j));
    m.push_back(std::move(row));
  }
  return dense_det(std::move(m));
}

namespace {

// Leading principal minors 1..n of [s_{l+i+j}] from the pivots of unpivoted
// symmetric elimination. Requires positive definiteness.
std::vector<Real> pd_chain(const MomentTable<Real>& table, int l, int n) {
  std::vector<Real> out{Real(1)};
  if (n <= 0) return out;
  const Real probe;
  const mpfr_prec_t prec = mpfr_get_prec(probe.backend().data());
  const std::size_t N = static_cast<std::size_t>(n);
  std::vector<mpfr_t> a(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      mpfr_init2(a[i * N + j], prec);
      mpfr_set(a[i * N + j], table.at(l + static_cast<int>(i + j)).backend().data(), MPFR_RNDN);
    }
  }
  mpfr_t m, det;
  mpfr_init2(m, prec);
  mpfr_init2(det, prec);
  mpfr_set_ui(det, 1, MPFR_RNDN);
  bool ok = true;
  for (std::size_t k = 0; k < N; ++k) {
    mpfr_ptr piv = a[k * N + k];
    if (mpfr_sgn(piv) <= 0) {
      ok = false;
      break;
    }
    mpfr_mul(det, det, piv, MPFR_RNDN);
    Real d;
    mpfr_set(d.backend().data(), det, MPFR_RNDN);
    out.push_back(d);
    for (std::size_t i = k + 1; i < N; ++i) {
      mpfr_div(m, a[k * N + i], piv, MPFR_RNDN);
      mpfr_neg(m, m, MPFR_RNDN);
      for (std::size_t j = i; j < N; ++j) {
        mpfr_fma(a[i * N + j], m, a[k * N + j], a[i * N + j], MPFR_RNDN);
      }
    }
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) mpfr_clear(a[i * N + j]);
  mpfr_clear(m);
  mpfr_clear(det);
  if (!ok) {
    throw PrecisionError("non-positive pivot in Hankel chain l = " + std::to_string(l) + " at k = " +
                             std::to_string(out.size()),
                         2 * table.work_digits);
  }
  return out;
}

}  // namespace

template <class T>
HankelGrid<T> build_grid(const MomentTable<T>& table, const GridOptions& opts) {
  if (table.k_max() < 0) throw ValidationError("moment table is empty");
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(table.work_digits);
  HankelGrid<T> grid;
  grid.table = table;
  const int K = table.K;
  const std::optional<std::size_t> D = table.support_size;

  for (int l = -2; l <= 3; ++l) {
    const int limit = delta_limit(l, K);
    int nonzero = limit;
    if (D) nonzero = std::min(limit, static_cast<int>(*D) + (l == -2 ? 1 : 0));
    const bool pd = (l == 0 || l == 2) ||
                    (table.positive_support && l != -2 && !(l == -1 && table.at(-1) == 0));
    auto& row = grid.delta[static_cast<std::size_t>(l + 2)];
    if (l == -2) nonzero = std::min(nonzero, opts.aux_max_k);
    if constexpr (!is_exact_v<T>) {
      if (pd) {
        row = pd_chain(table, l, nonzero);
      }
    }
    if (row.empty()) {
      row.push_back(T(1));
      for (int k = 1; k <= nonzero; ++k) row.push_back(hankel_det(table, l, k));
    }
    const int top = l == -2 ? std::min(limit, opts.aux_max_k) : limit;
    while (static_cast<int>(row.size()) <= top) row.push_back(T(0));
  }
  for (int l = -1; l <= 1; ++l) {
    const int limit = std::min(gamma_limit(l, K), opts.aux_max_k);
    auto& row = grid.gamma[static_cast<std::size_t>(l + 1)];
    row.push_back(T(0));
    for (int k = 1; k <= limit; ++k) {
      if (D && k > static_cast<int>(*D) + 1) {
        row.push_back(T(0));
      } else {
        row.push_back(gamma_det(table, l, k));
      }
    }
  }
  return grid;
}

template <class T>
KappaMap kappa(const HankelGrid<T>& grid) {
  KappaMap map;
  const int K = grid.table.K;
  const auto D = grid.table.support_size;
  map.finite = D && static_cast<int>(*D) <= K;
  map.top = map.finite ? static_cast<int>(*D) : std::min(K, grid.max_delta_k(1));
  map.kappa.push_back(0);
  const bool positive = grid.table.positive_support;
  while (true) {
    const int c = map.kappa.back();
    if (c + 1 > map.top) break;
    if (positive || !grid.is_zero(1, c + 1)) {
      map.kappa.push_back(c + 1);
      continue;
    }
    if (c + 2 > map.top) break;
    if (grid.is_zero(1, c + 2)) {
      throw PrecisionError("two consecutive vanishing Delta_{1,k} at k = " + std::to_string(c + 1),
                           2 * std::max(grid.table.work_digits, 30u));
    }
    map.kappa.push_back(c + 2);
  }
  map.N = static_cast<int>(map.kappa.size());
  return map;
}

Real IdentityReport::worst() const { return max(sylvester, max(bilinear1, bilinear2)); }

template <class T>
IdentityReport identity_residuals(const HankelGrid<T>& grid) {
  std::optional<WorkingPrecision> wp;
  if constexpr (!is_exact_v<T>) wp.emplace(grid.table.work_digits);
  IdentityReport rep;
  auto relres = [](const T& lhs, const std::vector<T>& terms, const T& rhs) -> Real {
    T scale(0);
    for (const T& t : terms) scale = std::max(scale, abs_of(t));
    if (scale == 0) return Real(0);
    T r = abs_of(T(lhs - rhs)) / scale;
    if constexpr (is_exact_v<T>) {
      return to_real(r);
    } else {
      return r;
    }
  };
  for (int l = -1; l <= 2; ++l) {
    for (int k = 1;; ++k) {
      if (!grid.has_delta(l + 1, k) || !grid.has_delta(l - 1, k + 1) || !grid.has_delta(l, k)) break;
      T a = grid.d(l + 1, k) * grid.d(l - 1, k);
      T b = grid.d(l + 1, k - 1) * grid.d(l - 1, k + 1);
      T c = grid.d(l, k) * grid.d(l, k);
      rep.sylvester = max(rep.sylvester, relres(T(a - b), {a, b, c}, c));
      ++rep.checked;
    }
  }
  for (int l = 0; l <= 1; ++l) {
    for (int k = 1;; ++k) {
      if (!grid.has_delta(l - 1, k) || !grid.has_delta(l + 2, k - 1) || !grid.has_gamma(l - 1, k) ||
          !grid.has_gamma(l, k - 1) || !grid.has_delta(l, k)) {
        break;
      }
      T lhs = grid.d(l - 1, k) * grid.d(l + 2, k - 1);
      T p = grid.d(l + 1, k - 1) * grid.g(l - 1, k);
      T q = grid.d(l, k) * grid.g(l, k - 1);
      rep.bilinear1 = max(rep.bilinear1, relres(lhs, {lhs, p, q}, T(p - q)));
      ++rep.checked;
    }
    for (int k = 1;; ++k) {
      if (!grid.has_delta(l - 1, k + 1) || !grid.has_delta(l + 2, k - 1) || !grid.has_gamma(l - 1, k) ||
          !grid.has_gamma(l, k) || !grid.has_delta(l + 1, k)) {
        break;
      }
      T lhs = grid.d(l - 1, k + 1) * grid.d(l + 2, k - 1);
      T p = grid.d(l + 1, k) * grid.g(l - 1, k);
      T q = grid.d(l, k) * grid.g(l, k);
      rep.bilinear2 = max(rep.bilinear2, relres(lhs, {lhs, p, q}, T(p - q)));
      ++rep.checked;
    }
  }
  return rep;
}

Real hankel_integral_oracle(const SpectralMeasureSpec& spec, int l, int k, const Real& t, unsigned digits) {
  if (k < 0 || k > 3) throw ValidationError("integral oracle supports 0 <= k <= 3");
  WorkingPrecision wp(digits);
  if (k == 0) return Real(1);
  const std::vector<Atom> atoms = discretize(spec, t, digits, k == 3 ? 2 : 3);
  const std::size_t M = atoms.size();
  std::vector<Real> w(M);
  for (std::size_t i = 0; i < M; ++i) w[i] = atoms[i].gamma * pow(atoms[i].lambda, l);
  Real total(0);
  if (k == 1) {
    for (const Real& v : w) total += v;
    return total;
  }
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = i + 1; j < M; ++j) {
      Real dij = atoms[i].lambda - atoms[j].lambda;
      Real pij = w[i] * w[j] * dij * dij;
      if (k == 2) {
        total += pij;
        continue;
      }
      for (std::size_t m = j + 1; m < M; ++m) {
        Real dim = atoms[i].lambda - atoms[m].lambda;
        Real djm = atoms[j].lambda - atoms[m].lambda;
        total += pij * w[m] * dim * dim * djm * djm;
      }
    }
  }
  return total;
}

template struct HankelGrid<Real>;
template struct HankelGrid<Rational>;
template Real dense_det(std::vector<std::vector<Real>>);
template Rational dense_det(std::vector<std::vector<Rational>>);
template Real hankel_det(const MomentTable<Real>&, int, int);
template Rational hankel_det(const MomentTable<Rational>&, int, int);
template Real gamma_det(const MomentTable<Real>&, int, int);
template Rational gamma_det(const MomentTable<Rational>&, int, int);
template HankelGrid<Real> build_grid(const MomentTable<Real>&, const GridOptions&);
template HankelGrid<Rational> build_grid(const MomentTable<Rational>&, const GridOptions&);
template KappaMap kappa(const HankelGrid<Real>&);
template KappaMap kappa(const HankelGrid<Rational>&);
template IdentityReport identity_residuals(const HankelGrid<Real>&);
template IdentityReport identity_residuals(const HankelGrid<Rational>&);

}  // namespace peakon
