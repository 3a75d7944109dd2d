#pragma once

#include <vector>

#include "peakon/inverse.hpp"

namespace peakon {

// Orthonormal polynomials P_0..P_M with positive leading coefficients and
// recurrence z P_k = b_k P_{k+1} + a_k P_k + b_{k-1} P_{k-1}.
// For a measure with exactly M atoms b_{M-1} = 0 and the last entry holds
// b_{M-1} P_M = (z - a_{M-1}) P_{M-1} - b_{M-2} P_{M-2} instead of P_M.
struct OrthoPolySet {
  int M = 0;
  Real s0{1};
  std::vector<Real> a;  // a_0..a_{M-1}
  std::vector<Real> b;  // b_0..b_{M-1}
  std::vector<std::vector<Real>> coeffs;  // ascending powers; empty unless requested
  unsigned work_digits = 0;

  // P_0(z)..P_M(z).
  std::vector<Real> values(const Real& z) const;
  // P_k(z) and P_k'(z), k = 0..M.
  void values_and_derivatives(const Real& z, std::vector<Real>& p, std::vector<Real>& dp) const;
  // b_{k-1} P_k(z) and its derivative, k = 1..M.
  void scaled_value(const Real& z, int k, Real& q, Real& dq) const;
};

struct JacobiParams {
  std::vector<Real> a, b;
};

// Chebyshev algorithm on s_0..s_{2M}; coefficient lists for M <= coeff_max.
OrthoPolySet orthopoly_from_moments(const MomentTable<Real>& table, int M, int coeff_max = 12);

OrthoPolySet orthopoly_from_params(const JacobiParams& params, const Real& s0, int M, int coeff_max = 12);

// Coefficients of P_k from the bordered Hankel determinant.
std::vector<Real> determinant_polynomial(const MomentTable<Real>& table, int k);

// Closed forms at t = 0 for the named weights and the infinite discrete family.
JacobiParams jacobi_params(const SpectralMeasureSpec& spec, int M);

// s_0..s_{kmax} rebuilt from a Jacobi matrix: s_k = s_0 (J^k)_{00}.
std::vector<Real> moments_from_params(const JacobiParams& params, const Real& s0, int kmax);

struct CdForms {
  Real sum{0};          // sum of P_k(z)^2
  Real determinant{0};  // bordered Hankel determinant
  Real confluent{0};    // b_n (P'_{n+1} P_n - P_{n+1} P'_n)
  Real spread() const;  // largest pairwise relative difference
};

CdForms cd_kernel(const OrthoPolySet& polys, const MomentTable<Real>& table, const Real& z, int n);

// Positions and heights from P_k(0), P_k'(0); n <= M peakons.
PeakonProfile<Real> peakons_via_op(const OrthoPolySet& polys, int n, const Real& t = Real(0));

// x_n = log sum_{k<n} P_k(0)^2.
std::vector<Real> positions_cd_sum(const OrthoPolySet& polys, int n);

}  // namespace peakon
