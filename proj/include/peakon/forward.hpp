#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "peakon/inverse.hpp"

namespace peakon {

// Discrete string: point masses at xt[n] (n >= 1) plus the mass at 0.
template <class T>
struct KreinLangerString {
  T w0{0};                 // omega tilde at 0
  T v0{0};                 // upsilon tilde at 0
  std::vector<T> xt;       // strictly increasing positions
  std::vector<T> w;        // omega tilde_n
  std::vector<T> v;        // upsilon tilde_n
  std::optional<Real> L;   // total length; nullopt means infinite

  std::size_t size() const { return xt.size(); }
  T gap(std::size_t n) const;  // ell tilde_n, 1-based
};

// m(z) = num(z) / den(z), ascending coefficients.
template <class T>
struct RationalWeylFunction {
  std::vector<T> num;
  std::vector<T> den;

  // Value at z = re + i im.
  std::pair<Real, Real> eval(const Real& re, const Real& im) const;
};

template <class T>
KreinLangerString<T> string_from_profile(const PeakonProfile<T>& profile);

template <class T>
RationalWeylFunction<T> weyl_from_string(const KreinLangerString<T>& string);

// Poles by Sturm isolation and Newton polishing, masses = -residues.
template <class T>
SpectralMeasureSpec measure_from_weyl(const RationalWeylFunction<T>& m, unsigned digits);

// Peakons given directly by positions and heights (no dipoles).
template <class T>
PeakonProfile<T> profile_from_peakons(const std::vector<T>& xt, const std::vector<T>& omega);

// Finite Krein-Langer string of a moment table (s_{-1} and s_{-2} set to 0).
template <class T>
KreinLangerString<T> psi_map(const MomentTable<T>& table);

enum class Determinacy { Determinate, Indeterminate };

struct StringEntry {
  Real gap, w, v;
};

struct TailEstimate {
  enum class Kind { Convergent, Divergent, Unknown } kind = Kind::Unknown;
  Real bound{0};       // upper bound for the remaining sum when convergent
  std::string reason;
};

// Infinite string given entry by entry, with tail information for the two
// series (Hamburger: gap + gap W^2 + v; Stieltjes: gap + w).
struct StringGenerator {
  std::function<StringEntry(std::size_t n)> entry;
  std::function<TailEstimate(std::size_t N, bool stieltjes, const Real& partial_w)> tail;
  bool stieltjes_applicable = false;
};

struct DeterminacyReport {
  Determinacy hamburger = Determinacy::Determinate;
  std::optional<Determinacy> stieltjes;
  Real hamburger_partial{0};
  Real stieltjes_partial{0};
  std::size_t terms = 0;
  std::string reason;
};

// Throws ComputationError when a tail estimate is inconclusive.
DeterminacyReport determinacy(const StringGenerator& gen, std::size_t terms);
template <class T>
DeterminacyReport determinacy(const KreinLangerString<T>& finite_string);

StringGenerator asc_string_generator(const Rational& a, const Rational& q);
StringGenerator laguerre_string_generator(const Rational& gamma, const Rational& alpha, unsigned digits);

struct RhoPlus {
  SpectralMeasureSpec measure;  // finite discrete
  Real truncation_bound{0};     // estimated relative mass of the dropped atoms
};

template <class T>
std::vector<std::pair<T, T>> rho_plus_atoms(const std::vector<std::pair<T, T>>& atoms);

// rho_plus of a finite measure or of the first `terms` atoms of the
// infinite discrete family.
RhoPlus rho_plus(const SpectralMeasureSpec& spec, std::size_t terms = 0);

}  // namespace peakon
