#include "support.hpp"

#include <algorithm>
#include <random>

#include "peakon/forward.hpp"

using namespace peakon;
using peakon::test::R;

namespace {

PeakonProfile<Rational> exact_profile(const SpectralMeasureSpec& spec) {
  return peakon_profile(build_grid(exact_moments(spec, static_cast<int>(spec.atoms.size()) + 1)));
}

std::vector<std::pair<Real, Real>> sorted_atoms(const SpectralMeasureSpec& spec) {
  std::vector<std::pair<Real, Real>> out;
  for (const auto& a : spec.atoms) out.emplace_back(a.lambda, a.gamma);
  std::sort(out.begin(), out.end());
  return out;
}

// omega tilde_0 + sum_j gamma_j / (lambda_j - z), evaluated directly.
std::pair<Real, Real> herglotz_sum(const std::vector<std::pair<Real, Real>>& atoms, const Real& c, const Real& re,
                                   const Real& im) {
  Real sr = c, si(0);
  for (const auto& [l, g] : atoms) {
    const Real dr = l - re, di = -im;
    const Real den = dr * dr + di * di;
    sr += g * dr / den;
    si -= g * di / den;
  }
  return {sr, si};
}

std::vector<std::pair<Rational, Rational>> random_points(std::mt19937_64& rng, int n, bool positive) {
  std::uniform_int_distribution<int> num(1, 15), den(1, 6), sign(0, 2);
  std::vector<std::pair<Rational, Rational>> pts;
  while (static_cast<int>(pts.size()) < n) {
    Rational lam(num(rng), den(rng));
    if (!positive && sign(rng) == 0) lam = -lam;
    bool dup = false;
    for (const auto& p : pts) dup = dup || p.first == lam;
    if (!dup) pts.emplace_back(lam, Rational(num(rng), den(rng)));
  }
  return pts;
}

}  // namespace

TEST_CASE("strings from profiles") {
  const auto one = string_from_profile(exact_profile(finite_discrete({{R(3), R(2)}})));
  REQUIRE(one.size() == 1);
  CHECK(one.xt[0] == R(1, 2));
  CHECK(one.w[0] == R(2, 3));
  CHECK(one.w0 == R(-2, 3));

  const auto two = string_from_profile(exact_profile(finite_discrete({{R(1), R(1)}, {R(2), R(1)}})));
  REQUIRE(two.size() == 2);
  CHECK(two.xt == std::vector<Rational>{R(1, 2), R(5)});
  CHECK(two.w == std::vector<Rational>{R(4, 3), R(1, 6)});
  CHECK(two.w0 == R(-3, 2));

  PeakonProfile<Rational> none;
  none.finite = true;
  const auto empty = string_from_profile(none);
  CHECK(empty.size() == 0);
  CHECK(empty.w0 == 0);
}

TEST_CASE("Weyl functions") {
  WorkingPrecision wp(60);
  SUBCASE("constant") {
    KreinLangerString<Rational> s;
    s.w0 = R(5, 7);
    const auto m = weyl_from_string(s);
    const auto [re, im] = m.eval(Real("0.3"), Real("1.7"));
    CHECK_REL(re, R(5, 7), 55);
    CHECK_ABS(im, Real(0), 55);
  }
  SUBCASE("one peakon recovers its atom") {
    const auto m = weyl_from_string(string_from_profile(exact_profile(finite_discrete({{R(3), R(2)}}))));
    const auto atoms = sorted_atoms(measure_from_weyl(m, 40));
    REQUIRE(atoms.size() == 1);
    CHECK_REL(atoms[0].first, R(3), 38);
    CHECK_REL(atoms[0].second, R(2), 38);
  }
  SUBCASE("prefix rule") {
    KreinLangerString<Rational> s;
    s.w0 = R(-1, 2);
    s.xt = {R(1, 3), R(2), R(9, 2)};
    s.w = {R(3), R(1, 5), R(7, 4)};
    s.v = {R(0), R(0), R(0)};
    KreinLangerString<Rational> rest;
    rest.w0 = s.w[0];
    for (std::size_t n = 1; n < s.size(); ++n) {
      rest.xt.push_back(s.xt[n] - s.xt[0]);
      rest.w.push_back(s.w[n]);
      rest.v.push_back(s.v[n]);
    }
    const auto m = weyl_from_string(s), ml = weyl_from_string(rest);
    const Real ell = to_real(s.xt[0]);
    for (const auto& [zr, zi] : std::vector<std::pair<const char*, const char*>>{{"0.4", "1"}, {"-2", "0.5"}, {"3", "2"}}) {
      const Real re(zr), im(zi);
      const auto [mr, mi] = ml.eval(re, im);
      // 1 / m_l
      const Real n2 = mr * mr + mi * mi;
      Real ar = mr / n2 - re * ell, ai = -mi / n2 - im * ell;
      const Real d2 = ar * ar + ai * ai;
      const Real want_r = to_real(s.w0) + ar / d2, want_i = -ai / d2;
      const auto [gr, gi] = m.eval(re, im);
      CHECK_REL(gr, want_r, 50);
      CHECK_REL(gi, want_i, 50);
    }
  }
}

TEST_CASE("measures from Weyl functions") {
  WorkingPrecision wp(60);
  const auto two = sorted_atoms(
      measure_from_weyl(weyl_from_string(string_from_profile(exact_profile(finite_discrete({{R(1), R(1)}, {R(2), R(1)}})))), 40));
  REQUIRE(two.size() == 2);
  CHECK_REL(two[0].first, R(1), 38);
  CHECK_REL(two[1].first, R(2), 38);
  CHECK_REL(two[0].second, R(1), 38);
  CHECK_REL(two[1].second, R(1), 38);

  const auto pair = profile_from_peakons<Rational>({R(16, 65), R(65, 16)}, {R(65, 63), R(-65, 63)});
  const auto signed_atoms = sorted_atoms(measure_from_weyl(weyl_from_string(string_from_profile(pair)), 40));
  REQUIRE(signed_atoms.size() == 2);
  CHECK_REL(signed_atoms[0].first, R(-1), 38);
  CHECK_REL(signed_atoms[1].first, R(1), 38);
  CHECK_REL(signed_atoms[0].second, R(1, 16), 38);
  CHECK_REL(signed_atoms[1].second, R(4), 38);
}

TEST_CASE("determinacy") {
  WorkingPrecision wp(60);
  const auto asc = determinacy(asc_string_generator(R(6, 5), R(4, 5)), 60);
  CHECK(asc.hamburger == Determinacy::Indeterminate);
  const auto lag = determinacy(laguerre_string_generator(R(0), R(1, 2), 40), 12);
  CHECK(lag.hamburger == Determinacy::Determinate);
  const auto fin = determinacy(string_from_profile(exact_profile(finite_discrete({{R(1), R(1)}, {R(2), R(1)}}))));
  CHECK(fin.hamburger == Determinacy::Determinate);
}

TEST_CASE("psi map") {
  const auto one = psi_map(exact_moments(finite_discrete({{R(3), R(2)}}), 2));
  REQUIRE(one.size() == 1);
  CHECK(one.xt[0] == R(1, 2));
  const auto two = psi_map(exact_moments(finite_discrete({{R(1), R(1)}, {R(2), R(1)}}), 3));
  CHECK(two.xt == std::vector<Rational>{R(1, 2), R(5)});
  const auto sym = psi_map(exact_moments(finite_discrete({{R(1), R(1)}, {R(-1), R(1)}}), 3));
  REQUIRE(sym.size() == 1);
  CHECK(sym.w[0] == 0);
  CHECK(sym.v[0] == 2);

  WorkingPrecision wp(80);
  for (const auto& spec : {laguerre(R(0), R(1, 2)), jacobi(R(0), R(0), R(1, 20))}) {
    const auto table = moments(spec, Real(0), 10, 40);
    WorkingPrecision w2(table.work_digits);
    const auto s = psi_map(table);
    const auto p = peakon_profile(build_grid(table));
    REQUIRE(s.size() >= 8);
    for (std::size_t n = 0; n < 8; ++n) {
      CHECK_REL(log(s.xt[n]), p.x[n], 35);
      CHECK_REL(s.w[n] * s.xt[n], p.omega[n], 35);
    }
  }
}

TEST_CASE("rho plus") {
  const auto one = rho_plus_atoms<Rational>({{R(5), R(3)}});
  REQUIRE(one.size() == 1);
  CHECK(one[0].first == 5);
  CHECK(one[0].second == R(1, 3));
  const auto two = rho_plus_atoms<Rational>({{R(1), R(1)}, {R(2), R(1)}});
  CHECK(two == std::vector<std::pair<Rational, Rational>>{{R(1), R(4)}, {R(2), R(1)}});

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto pts = random_points(rng, 1 + trial % 5, false);
    std::sort(pts.begin(), pts.end());
    CHECK(rho_plus_atoms(rho_plus_atoms(pts)) == pts);
  }
}

TEST_CASE("round trip and Herglotz property on random measures") {
  WorkingPrecision wp(80);
  const unsigned digits = 60;
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 16; ++trial) {
    const bool positive = trial % 2 == 0;
    const auto pts = random_points(rng, 1 + trial % 8, positive);
    const auto spec = finite_discrete(pts);
    const auto table = moments(spec, Real(0), static_cast<int>(pts.size()) + 1, digits);
    WorkingPrecision w2(table.work_digits);
    const auto profile = peakon_profile(build_grid(table));
    const auto m = weyl_from_string(string_from_profile(profile));
    const auto back = sorted_atoms(measure_from_weyl(m, digits));
    std::vector<std::pair<Real, Real>> want;
    for (const auto& [l, g] : pts) want.emplace_back(to_real(l), to_real(g));
    std::sort(want.begin(), want.end());
    INFO("trial ", trial);
    REQUIRE(back.size() == want.size());
    for (std::size_t j = 0; j < want.size(); ++j) {
      CHECK_REL(back[j].first, want[j].first, digits - 25);
      CHECK_REL(back[j].second, want[j].second, digits - 25);
    }
    const Real c = to_real(-table.at(-1));
    for (const char* ys : {"0.01", "1", "100"}) {
      for (const char* xs : {"-3", "0", "2.5"}) {
        const auto [re, im] = m.eval(Real(xs), Real(ys));
        CHECK(im >= 0);
        const auto [hr, hi] = herglotz_sum(want, c, Real(xs), Real(ys));
        CHECK_REL(re, hr, 40);
        CHECK_REL(im, hi, 40);
      }
    }
  }
}

TEST_CASE("rho plus of the infinite discrete family") {
  WorkingPrecision wp(60);
  const auto spec = al_salam_carlitz(R(3, 2), R(1, 2));
  const auto shorter = rho_plus(spec, 30);
  const auto longer = rho_plus(spec, 60);
  const auto atoms = asc_atoms(R(3, 2), R(1, 2), 30);
  REQUIRE(shorter.measure.atoms.size() == 30);
  Real head(0), all(0);
  for (std::size_t j = 0; j < 30; ++j) {
    CHECK_REL(shorter.measure.atoms[j].lambda, atoms[j].lambda, 50);
    CHECK_REL(shorter.measure.atoms[j].gamma, longer.measure.atoms[j].gamma, 50);
    CHECK(shorter.measure.atoms[j].gamma > 0);
    head += shorter.measure.atoms[j].gamma;
  }
  for (const auto& a : longer.measure.atoms) all += a.gamma;
  CHECK((all - head) / all <= 2 * shorter.truncation_bound);
}
