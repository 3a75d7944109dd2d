#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "peakon/numeric.hpp"

namespace peakon {

enum class MeasureKind { FiniteDiscrete, AlSalamCarlitz, Laguerre, Jacobi, StieltjesWigert };

std::string kind_name(MeasureKind kind);

// A point mass. The exact fields are present when the atom was given as
// rational data; the Real fields are always filled.
struct Atom {
  Real lambda;
  Real gamma;
  std::optional<Rational> lambda_q;
  std::optional<Rational> gamma_q;
};

// Spectral measure rho_0 together with an accumulated flow time.
struct SpectralMeasureSpec {
  MeasureKind kind = MeasureKind::FiniteDiscrete;
  std::vector<Atom> atoms;
  // AlSalamCarlitz: a, q.  Laguerre: gamma, alpha.  Jacobi: a, b, alpha.
  // StieltjesWigert: kappa, alpha.
  Rational p1, p2, p3;
  // Optional positive density factor h(lambda), named weights only.
  std::function<Real(const Real&)> weight_factor;
  // Flow time already applied by evolve().
  Real time_offset{0};
  // Fixed number of atoms for the infinite discrete family (0 = adaptive).
  std::size_t fixed_terms = 0;

  bool positive_support() const;
  bool is_discrete() const {
    return kind == MeasureKind::FiniteDiscrete || kind == MeasureKind::AlSalamCarlitz;
  }
};

SpectralMeasureSpec finite_discrete(const std::vector<std::pair<Rational, Rational>>& points);
SpectralMeasureSpec finite_discrete_real(const std::vector<std::pair<Real, Real>>& points);
SpectralMeasureSpec laguerre(const Rational& gamma, const Rational& alpha);
SpectralMeasureSpec jacobi(const Rational& a, const Rational& b, const Rational& alpha);
SpectralMeasureSpec stieltjes_wigert(const Rational& kappa, const Rational& alpha);
SpectralMeasureSpec al_salam_carlitz(const Rational& a, const Rational& q);

// Throws ValidationError on violated parameter constraints.
void validate(const SpectralMeasureSpec& spec);

SpectralMeasureSpec evolve(const SpectralMeasureSpec& spec, const Real& t);

struct TruncationReport {
  std::size_t terms = 0;
  Real tail_bound{0};  // max relative tail over all reported moments
};

// Moments s_{-1}, ..., s_{2K} at one time. s_k for k < -1 reads as zero.
template <class T>
struct MomentTable {
  Real t{0};
  int K = 0;
  std::vector<T> s;           // s[k+1] = s_k
  unsigned digits = 0;        // requested accuracy
  unsigned work_digits = 0;   // precision the values carry
  bool positive_support = false;
  std::optional<std::size_t> support_size;
  TruncationReport truncation;

  int k_max() const { return static_cast<int>(s.size()) - 2; }
  T at(int k) const {
    if (k < -1 || k > k_max()) return T(0);
    return s[static_cast<std::size_t>(k + 1)];
  }
};

// Table from raw moment values (s_{-1} first). Used for rescaled moments.
template <class T>
MomentTable<T> table_from_values(std::vector<T> values, unsigned digits, bool positive_support,
                                 std::optional<std::size_t> support_size = std::nullopt);

struct MomentOptions {
  // Extra guard digits for downstream Hankel work; default_guard() if unset.
  std::optional<unsigned> guard_digits;
  // Force quadrature for every moment.
  bool quadrature_only = false;
};

// Guard digits covering the loss of the Hankel chains up to order K at time t.
unsigned default_guard(const SpectralMeasureSpec& spec, int K, const Real& t = Real(0));

// s_k(t) = int lambda^k exp(-t/(2 lambda)) rho_0(dlambda), k = -1..2K.
MomentTable<Real> moments(const SpectralMeasureSpec& spec, const Real& t, int K, unsigned digits,
                          const MomentOptions& opts = {});

// Exact moments at t = 0 for finite rational data.
MomentTable<Rational> exact_moments(const SpectralMeasureSpec& spec, int K);

// Direct quadrature for k = kmin..kmax of a named weight (oracle path).
std::vector<Real> quadrature_moments(const SpectralMeasureSpec& spec, const Real& t, int kmin, int kmax,
                                     unsigned digits);

// Quadrature nodes as weighted atoms (flow factor included) with step
// 2^-level per panel; exact atoms for discrete measures.
std::vector<Atom> discretize(const SpectralMeasureSpec& spec, const Real& t, unsigned digits, int level = 3);

// The first `count` atoms of the infinite discrete family.
std::vector<Atom> asc_atoms(const Rational& a, const Rational& q, std::size_t count);

// (x; q)_n and (x; q)_inf at the working precision.
Real q_pochhammer(const Real& x, const Real& q, std::size_t n);
Real q_pochhammer_inf(const Real& x, const Real& q);

}  // namespace peakon
