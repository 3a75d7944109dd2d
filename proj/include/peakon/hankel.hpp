#pragma once

#include <array>
#include <optional>
#include <vector>

#include "peakon/measure.hpp"

namespace peakon {

struct GridOptions {
  // Largest k for which Gamma_{l,k} and Delta_{-2,k} are evaluated; these
  // need one dense determinant per k.
  int aux_max_k = 40;
};

// Delta_{l,k} for l = -2..3 and Gamma_{l,k} for l = -1..1.
template <class T>
struct HankelGrid {
  MomentTable<T> table;
  std::array<std::vector<T>, 6> delta;  // delta[l + 2][k]
  std::array<std::vector<T>, 3> gamma;  // gamma[l + 1][k]

  bool has_delta(int l, int k) const;
  bool has_gamma(int l, int k) const;
  const T& d(int l, int k) const;   // throws if not cached
  const T& g(int l, int k) const;
  int max_delta_k(int l) const { return static_cast<int>(delta[static_cast<std::size_t>(l + 2)].size()) - 1; }

  // |Delta_{1,k}| <= tau(k) counts as zero. Scale sqrt(Delta_{0,k} Delta_{2,k})
  // bounds |Delta_{1,k}| by the Sylvester identity.
  Real tau(int k) const;
  bool is_zero(int l, int k) const;
};

// Highest k with Delta_{l,k} computable from moments up to s_{2K}.
int delta_limit(int l, int K);
int gamma_limit(int l, int K);

template <class T>
HankelGrid<T> build_grid(const MomentTable<T>& table, const GridOptions& opts = {});

// Independent dense evaluations (partial pivoting or Bareiss).
template <class T>
T hankel_det(const MomentTable<T>& table, int l, int k);
template <class T>
T gamma_det(const MomentTable<T>& table, int l, int k);

// Dense determinant of a square matrix; Bareiss on the exact path.
template <class T>
T dense_det(std::vector<std::vector<T>> m);

struct KappaMap {
  std::vector<int> kappa;  // kappa[n-1] = kappa(n)
  int N = 0;                // entries, including the closing index D of a finite chain
  bool finite = false;      // chain closed by a finite support
  int top = 0;              // last index inspected (D or K)
};

template <class T>
KappaMap kappa(const HankelGrid<T>& grid);

struct IdentityReport {
  Real sylvester{0};
  Real bilinear1{0};
  Real bilinear2{0};
  std::size_t checked = 0;
  Real worst() const;
};

template <class T>
IdentityReport identity_residuals(const HankelGrid<T>& grid);

// Delta_{l,k}(t) as the k-fold integral (1/k!) int lambda^l D_k(lambda) rho(dlambda),
// evaluated by summation over atoms or over a tanh-sinh node set; k <= 3.
Real hankel_integral_oracle(const SpectralMeasureSpec& spec, int l, int k, const Real& t, unsigned digits);

}  // namespace peakon
