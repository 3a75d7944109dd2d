#include "support.hpp"

#include <random>

#include "peakon/hankel.hpp"

using namespace peakon;
using peakon::test::R;

namespace {

// Cofactor expansion along the first row; independent of the library's elimination.
Rational cofactor_det(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Rational acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Rational>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Rational> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(m[i][c]);
      }
      minor.push_back(row);
    }
    const Rational term = m[0][j] * cofactor_det(minor);
    acc += (j % 2 == 0) ? term : Rational(-term);
  }
  return acc;
}

Rational hankel_oracle(const MomentTable<Rational>& t, int l, int k) {
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t.at(l + i + j);
  }
  return cofactor_det(m);
}

// Rows 0, 2, 3, ..., k of the (k+1)-row Hankel block starting at s_l.
Rational gamma_oracle(const MomentTable<Rational>& t, int l, int k) {
  if (k == 0) return 0;
  std::vector<std::vector<Rational>> m;
  for (int i = 0; i <= k; ++i) {
    if (i == 1) continue;
    std::vector<Rational> row;
    for (int j = 0; j < k; ++j) row.push_back(t.at(l + i + j));
    m.push_back(row);
  }
  return cofactor_det(m);
}

const auto two_point = [] { return finite_discrete({{R(1), R(1)}, {R(2), R(1)}}); };

}  // namespace

TEST_CASE("two-point determinants by hand") {
  const auto table = exact_moments(two_point(), 3);
  CHECK(table.at(0) == 2);
  CHECK(table.at(1) == 3);
  CHECK(table.at(2) == 5);
  CHECK(table.at(3) == 9);
  CHECK(table.at(4) == 17);
  const auto grid = build_grid(table);
  for (int l = -2; l <= 3; ++l) CHECK(grid.d(l, 0) == 1);
  CHECK(grid.d(-2, 1) == 0);
  CHECK(grid.d(0, 2) == 1);
  CHECK(grid.d(1, 2) == 2);
  CHECK(grid.d(2, 2) == 4);
  for (int l = -1; l <= 1; ++l) CHECK(grid.g(l, 0) == 0);
  CHECK(grid.g(0, 2) == 3);
  CHECK(grid.g(1, 1) == 3);
  CHECK(gamma_det(table, 0, 2) == 3);
  // Sylvester at l = 1, k = 1: 10 - 1 = 9 = Delta_{1,1}^2.
  CHECK(grid.d(2, 1) * grid.d(0, 1) - grid.d(2, 0) * grid.d(0, 2) == 9);
  CHECK(grid.d(1, 1) * grid.d(1, 1) == 9);
}

TEST_CASE("kappa maps") {
  SUBCASE("one point") {
    const auto grid = build_grid(exact_moments(finite_discrete({{R(3), R(2)}}), 2));
    const auto km = kappa(grid);
    CHECK(km.kappa == std::vector<int>{0, 1});
    CHECK(km.finite);
  }
  SUBCASE("symmetric pair") {
    const auto table = exact_moments(finite_discrete({{R(1), R(1)}, {R(-1), R(1)}}), 3);
    CHECK(table.at(-1) == 0);
    const auto grid = build_grid(table);
    CHECK(grid.d(1, 1) == 0);
    CHECK(grid.d(1, 2) == -4);
    const auto km = kappa(grid);
    CHECK(km.kappa == std::vector<int>{0, 2});
  }
  SUBCASE("laguerre") {
    WorkingPrecision wp(80);
    for (const char* ts : {"-5", "0", "5"}) {
      const auto table = moments(laguerre(R(0), R(1, 2)), Real(ts), 10, 40);
      WorkingPrecision w2(table.work_digits);
      const auto km = kappa(build_grid(table));
      REQUIRE(km.kappa.size() >= 8);
      for (std::size_t n = 0; n < km.kappa.size(); ++n) CHECK(km.kappa[n] == static_cast<int>(n));
    }
  }
}

TEST_CASE("identity residuals vanish on the exact path") {
  for (const auto& spec : {finite_discrete({{R(3), R(2)}}), two_point(),
                           finite_discrete({{R(1), R(1)}, {R(-1), R(1)}}),
                           finite_discrete({{R(-2), R(1, 3)}, {R(1, 2), R(5)}, {R(4), R(2, 7)}})}) {
    const auto r = identity_residuals(build_grid(exact_moments(spec, 5)));
    CHECK(r.checked > 0);
    CHECK(r.worst() == 0);
  }
}

TEST_CASE("integral oracle") {
  WorkingPrecision wp(60);
  const auto spec = two_point();
  CHECK_REL(hankel_integral_oracle(spec, 0, 2, Real(0), 40), R(1), 38);
  CHECK_REL(hankel_integral_oracle(spec, 0, 0, Real(0), 40), R(1), 38);
  for (int l = -1; l <= 3; ++l) CHECK_REL(hankel_integral_oracle(spec, l, 1, Real(0), 40), exact_moments(spec, 3).at(l), 38);

  const auto lag = laguerre(R(1, 2), R(1));
  const auto table = moments(lag, Real(1), 4, 40);
  WorkingPrecision w2(table.work_digits);
  const auto grid = build_grid(table);
  // The oracle uses a fixed tanh-sinh rule, coarser for the triple sum.
  for (int l = 0; l <= 2; ++l) {
    for (int k = 1; k <= 2; ++k) CHECK_REL(hankel_integral_oracle(lag, l, k, Real(1), 40), grid.d(l, k), 18);
    CHECK_REL(hankel_integral_oracle(lag, l, 3, Real(1), 40), grid.d(l, 3), 6);
  }
}

TEST_CASE("chained determinants match cofactor expansion on random rational measures") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(1, 12), den(1, 5), sign(0, 2);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<std::pair<Rational, Rational>> pts;
    for (int i = 0; i < 2 + trial % 4; ++i) {
      Rational lam(num(rng), den(rng));
      if (sign(rng) == 0) lam = -lam;
      bool dup = false;
      for (const auto& p : pts) dup = dup || p.first == lam;
      if (!dup) pts.emplace_back(lam, Rational(num(rng), den(rng)));
    }
    const auto table = exact_moments(finite_discrete(pts), 5);
    const auto grid = build_grid(table);
    for (int l = -2; l <= 3; ++l) {
      for (int k = 0; k <= std::min(5, grid.max_delta_k(l)); ++k) {
        INFO("trial ", trial, " l=", l, " k=", k);
        CHECK(grid.d(l, k) == hankel_oracle(table, l, k));
      }
    }
    for (int l = -1; l <= 1; ++l) {
      for (int k = 0; k <= 4; ++k) {
        if (!grid.has_gamma(l, k)) continue;
        CHECK(grid.g(l, k) == gamma_oracle(table, l, k));
      }
    }
  }
}

TEST_CASE("chained determinants match dense evaluation for named families") {
  WorkingPrecision wp(80);
  const unsigned digits = 50;
  for (const auto& spec : {laguerre(R(0), R(1, 2)), jacobi(R(0), R(0), R(1, 20)), al_salam_carlitz(R(6, 5), R(4, 5))}) {
    for (const char* ts : {"-10", "0", "10"}) {
      const auto table = moments(spec, Real(ts), 14, digits);
      WorkingPrecision w2(table.work_digits);
      const auto grid = build_grid(table);
      for (int l = -1; l <= 2; ++l) {
        for (int k : {1, 4, 9, 13}) {
          if (k > grid.max_delta_k(l)) continue;
          INFO(kind_name(spec.kind), " t=", ts, " l=", l, " k=", k);
          CHECK_REL(grid.d(l, k), hankel_det(table, l, k), digits - 15);
        }
      }
    }
  }
}

TEST_CASE("Sylvester and bilinear residuals across families") {
  WorkingPrecision wp(80);
  const unsigned digits = 50;
  for (const auto& spec : {laguerre(R(0), R(1, 2)), jacobi(R(0), R(0), R(1, 20)), al_salam_carlitz(R(6, 5), R(4, 5)),
                           stieltjes_wigert(R(1), R(1))}) {
    for (const char* ts : {"-10", "0", "10"}) {
      const auto table = moments(spec, Real(ts), 12, digits);
      WorkingPrecision w2(table.work_digits);
      const auto r = identity_residuals(build_grid(table));
      INFO(kind_name(spec.kind), " t=", ts, " worst=", test::str(r.worst()));
      CHECK(r.worst() <= pow10_neg(digits / 2.0));
    }
  }
}

TEST_CASE("kappa is stable under relative perturbations of size 10^-digits") {
  WorkingPrecision wp(80);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const unsigned digits = 40;
  for (const auto& spec : {finite_discrete({{R(1), R(1)}, {R(-2), R(3)}, {R(3), R(1, 2)}}), laguerre(R(0), R(1, 2))}) {
    const auto table = moments(spec, Real("0.5"), 5, digits);
    WorkingPrecision w2(table.work_digits);
    const auto grid = build_grid(table);
    const auto base = kappa(grid);
    Real min_nonzero(-1);
    for (int k = 1; k <= grid.max_delta_k(1); ++k) {
      if (grid.is_zero(1, k)) continue;
      const Real a = abs(grid.d(1, k)) / grid.tau(k);
      if (min_nonzero < 0 || a < min_nonzero) min_nonzero = a;
    }
    REQUIRE(min_nonzero > 10);
    for (int trial = 0; trial < 10; ++trial) {
      auto perturbed = table;
      for (auto& s : perturbed.s) s *= 1 + Real(u(rng)) * pow10_neg(digits);
      CHECK(kappa(build_grid(perturbed)).kappa == base.kappa);
    }
  }
}
