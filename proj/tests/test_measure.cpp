#include "support.hpp"

#include <random>

#include "peakon/hankel.hpp"
#include "peakon/flow.hpp"

using namespace peakon;
using peakon::test::R;

namespace {

// int_0^inf (alpha + x)^k x^gamma e^{-x} dx / Gamma(gamma + 1), expanded binomially.
Real laguerre_moment_oracle(int k, const Real& gamma, const Real& alpha) {
  Real acc(0), binom(1);
  for (int j = 0; j <= k; ++j) {
    acc += binom * pow(alpha, k - j) * exp(log_gamma(gamma + 1 + j) - log_gamma(gamma + 1));
    binom = binom * (k - j) / (j + 1);
  }
  return acc;
}

}  // namespace

TEST_CASE("parse_rational reads decimals and fractions exactly") {
  CHECK(parse_rational("0.05") == R(1, 20));
  CHECK(parse_rational("1/20") == R(1, 20));
  CHECK(parse_rational("-3e2") == R(-300));
  CHECK(parse_rational(".5") == R(1, 2));
  CHECK(parse_rational("0.25") == R(1, 4));
  CHECK(parse_rational("0.08") == R(2, 25));
  CHECK(parse_rational("-007/010") == R(-7, 10));
  CHECK(parse_rational("0") == 0);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
}

TEST_CASE("working precision is scoped") {
  WorkingPrecision outer(50);
  {
    WorkingPrecision inner(300);
    CHECK(current_digits() == 300);
  }
  CHECK(current_digits() == 50);
}

TEST_CASE("one-point moments") {
  const auto spec = finite_discrete({{R(3), R(2)}});
  const auto exact = exact_moments(spec, 1);
  REQUIRE(exact.s.size() == 4);
  CHECK(exact.at(-1) == R(2, 3));
  CHECK(exact.at(0) == R(2));
  CHECK(exact.at(1) == R(6));
  CHECK(exact.at(2) == R(18));
  CHECK(exact.at(-2) == 0);

  WorkingPrecision wp(80);
  const auto num = moments(spec, Real(0), 1, 60);
  for (int k = -1; k <= 2; ++k) CHECK_REL(num.at(k), exact.at(k), 60);

  const Real t = 6 * log(Real(4));
  CHECK_REL(moments(spec, t, 1, 60).at(0), R(1, 2), 58);
}

TEST_CASE("laguerre moments at t = 0") {
  WorkingPrecision wp(80);
  const auto table = moments(laguerre(R(0), R(1, 2)), Real(0), 5, 60);
  CHECK_REL(table.at(0), R(1), 58);
  CHECK_REL(table.at(1), R(3, 2), 58);
  CHECK_REL(table.at(2), R(13, 4), 58);
  for (int k = 0; k <= 10; ++k) CHECK_REL(table.at(k), laguerre_moment_oracle(k, Real(0), Real("0.5")), 55);

  const auto g = moments(laguerre(R(1, 3), R(2)), Real(0), 5, 60);
  for (int k = 0; k <= 10; ++k) CHECK_REL(g.at(k), laguerre_moment_oracle(k, to_real(R(1, 3)), Real(2)), 55);
}

TEST_CASE("stieltjes-wigert log-normal moments") {
  WorkingPrecision wp(80);
  const auto table = moments(stieltjes_wigert(R(1), R(0)), Real(0), 4, 60);
  for (int n = 0; n <= 8; ++n) CHECK_REL(table.at(n), exp(Real((n + 1) * (n + 1)) / 4), 58);
}

TEST_CASE("evolution") {
  WorkingPrecision wp(80);
  const auto spec = finite_discrete({{R(3), R(2)}, {R(1, 2), R(5)}});
  const auto base = moments(spec, Real(0), 3, 60);
  const auto same = moments(evolve(spec, Real(0)), Real(0), 3, 60);
  for (int k = -1; k <= 6; ++k) CHECK(same.at(k) == base.at(k));

  const auto there_and_back = moments(evolve(evolve(spec, Real("2.5")), Real("-2.5")), Real(0), 3, 60);
  for (int k = -1; k <= 6; ++k) CHECK_REL(there_and_back.at(k), base.at(k), 58);

  const auto lag = laguerre(R(0), R(1, 2));
  CHECK(moments(lag, Real(10), 1, 40).at(0) < 1);
}

TEST_CASE("named weights agree with quadrature for k <= 10") {
  WorkingPrecision wp(80);
  const unsigned digits = 50;
  for (const auto& spec : {laguerre(R(0), R(1, 2)), laguerre(R(-1, 2), R(1)), jacobi(R(0), R(0), R(1, 20)),
                           jacobi(R(1, 2), R(-1, 3), R(1))}) {
    for (const char* ts : {"-3", "0", "3"}) {
      const Real t(ts);
      const auto table = moments(spec, t, 5, digits);
      const auto quad = quadrature_moments(spec, t, 0, 10, digits);
      for (int k = 0; k <= 10; ++k) {
        INFO(kind_name(spec.kind), " t=", ts, " k=", k);
        CHECK_REL(table.at(k), quad[static_cast<std::size_t>(k)], digits - 20);
      }
    }
  }
}

TEST_CASE("positive measures give positive Hankel minors") {
  WorkingPrecision wp(80);
  for (const auto& spec : {laguerre(R(0), R(1, 2)), jacobi(R(0), R(0), R(1, 20)), al_salam_carlitz(R(6, 5), R(4, 5)),
                           finite_discrete({{R(1), R(1)}, {R(2), R(1)}, {R(7, 2), R(1, 3)}})}) {
    for (const char* ts : {"-10", "0", "10"}) {
      const auto table = moments(spec, Real(ts), 12, 40);
      WorkingPrecision w2(table.work_digits);
      const auto grid = build_grid(table);
      const int kmax = spec.kind == MeasureKind::FiniteDiscrete ? 3 : 12;
      for (int l = 0; l <= 2; ++l) {
        for (int k = 0; k <= std::min(kmax, grid.max_delta_k(l)); ++k) {
          INFO(kind_name(spec.kind), " t=", ts, " l=", l, " k=", k);
          CHECK(grid.d(l, k) > 0);
        }
      }
    }
  }
}

TEST_CASE("infinite discrete truncation stays within its tail bound") {
  WorkingPrecision wp(80);
  for (const auto& base : {al_salam_carlitz(R(6, 5), R(4, 5)), al_salam_carlitz(R(3, 2), R(1, 2))}) {
    for (const char* ts : {"-2", "0", "2"}) {
      const auto coarse = moments(base, Real(ts), 6, 40);
      REQUIRE(coarse.truncation.terms > 0);
      auto doubled = base;
      doubled.fixed_terms = 2 * coarse.truncation.terms;
      const auto fine = moments(doubled, Real(ts), 6, 40);
      for (int k = -1; k <= 12; ++k) {
        INFO("t=", ts, " k=", k, " terms=", coarse.truncation.terms);
        CHECK(test::rel_err(coarse.at(k), fine.at(k)) <= coarse.truncation.tail_bound);
      }
    }
  }
}

TEST_CASE("asc atoms") {
  WorkingPrecision wp(60);
  const auto atoms = asc_atoms(R(6, 5), R(4, 5), 300);
  CHECK_REL(atoms[0].lambda, R(1, 5), 55);
  Real mass(0);
  for (const auto& a : atoms) mass += a.gamma;
  CHECK_REL(mass, R(1), 40);
  for (std::size_t n = 1; n < atoms.size(); ++n) CHECK(atoms[n].lambda > atoms[n - 1].lambda);
}

TEST_CASE("q-Pochhammer against the product") {
  WorkingPrecision wp(60);
  const Real x("0.3"), q("0.7");
  Real prod(1);
  for (int k = 0; k < 12; ++k) prod *= 1 - x * pow(q, k);
  CHECK_REL(q_pochhammer(x, q, 12), prod, 55);
  for (int k = 12; k < 2000; ++k) prod *= 1 - x * pow(q, k);
  CHECK_REL(q_pochhammer_inf(x, q), prod, 50);
}

TEST_CASE("invalid measures are rejected") {
  CHECK_THROWS_AS(validate(finite_discrete({{R(0), R(1)}})), ValidationError);
  CHECK_THROWS_AS(validate(finite_discrete({{R(1), R(-1)}})), ValidationError);
  CHECK_THROWS_AS(validate(finite_discrete({{R(1), R(1)}, {R(1), R(2)}})), ValidationError);
  CHECK_THROWS_AS(validate(laguerre(R(0), R(0))), ValidationError);
  CHECK_THROWS_AS(validate(laguerre(R(-1), R(1))), ValidationError);
  CHECK_THROWS_AS(validate(jacobi(R(-2), R(0), R(1))), ValidationError);
  CHECK_THROWS_AS(validate(al_salam_carlitz(R(3), R(1, 2))), ValidationError);
  CHECK_THROWS_AS(moments(laguerre(R(0), R(1)), Real(0), 2, 20), ValidationError);
}

TEST_CASE("random discrete measures: sums against direct evaluation") {
  WorkingPrecision wp(80);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 30), den(1, 7), sign(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<Rational, Rational>> pts;
    const int n = 1 + trial % 5;
    for (int i = 0; i < n; ++i) {
      Rational lam(num(rng), den(rng));
      if (sign(rng) == 0) lam = -lam;
      bool dup = false;
      for (const auto& p : pts) dup = dup || p.first == lam;
      if (!dup) pts.emplace_back(lam, Rational(num(rng), den(rng)));
    }
    const auto spec = finite_discrete(pts);
    const Real t("0.75");
    const auto table = moments(spec, t, 3, 50);
    for (int k = -1; k <= 6; ++k) {
      Real direct(0);
      for (const auto& [lam, g] : pts) {
        const Real l = to_real(lam);
        direct += to_real(g) * pow(l, k) * exp(-t / (2 * l));
      }
      CHECK_REL(table.at(k), direct, 45);
    }
  }
}
