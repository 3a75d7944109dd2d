#include "support.hpp"

#include "peakon/flow.hpp"

using namespace peakon;
using peakon::test::R;

namespace {

const auto one_point = [] { return finite_discrete({{R(3), R(2)}}); };
const auto two_point = [] { return finite_discrete({{R(1), R(1)}, {R(2), R(1)}}); };
const auto symmetric = [] { return finite_discrete({{R(1), R(1)}, {R(-1), R(1)}}); };
const auto crossing = [] { return finite_discrete({{R(-1), R(1, 16)}, {R(1), R(4)}}); };

}  // namespace

TEST_CASE("sampling grids and step sizes") {
  WorkingPrecision wp(40);
  const auto g = SampleGrid::parse("-1:1:0.5");
  const auto pts = g.points();
  REQUIRE(pts.size() == 5);
  CHECK(pts.front() == -1);
  CHECK(pts.back() == 1);
  CHECK_THROWS_AS(SampleGrid::parse("1:0:0.1"), ValidationError);
  CHECK_REL(default_step(16), Real("1e-3"), 30);
  CHECK_REL(default_step(40), Real("1e-5"), 30);
  CHECK_REL(default_step(200), Real("1e-6"), 30);
}

TEST_CASE("one-point snapshot moves at speed 1/6") {
  WorkingPrecision wp(80);
  for (const char* ts : {"-3", "0", "2", "7.5"}) {
    const Real t(ts);
    const auto s = snapshot(one_point(), t, 1, 60);
    REQUIRE(s.profile.size() == 1);
    CHECK_REL(s.profile.x[0], Real(-log(Real(2)) + t / 6), 55);
    CHECK_REL(s.profile.omega[0], R(1, 3), 55);
  }
}

TEST_CASE("snapshot samples follow the peakon sum") {
  WorkingPrecision wp(80);
  const auto s = snapshot(two_point(), Real("1.5"), 2, 60, SampleGrid::parse("-3:4:0.25"));
  REQUIRE(!s.samples.empty());
  for (const auto& [x, u] : s.samples) {
    Real sum(0);
    for (std::size_t j = 0; j < 2; ++j) sum += s.profile.omega[j] * exp(-abs(x - s.profile.x[j])) / 2;
    CHECK_REL(u, sum, 50);
  }
}

TEST_CASE("laguerre wave front advances") {
  WorkingPrecision wp(80);
  const auto table = trajectory(laguerre(R(0), R(1, 2)), {Real(-4), Real(-1), Real(0), Real(2), Real(6)}, 3, 40);
  REQUIRE(table.rows.size() == 5);
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].x[0] > table.rows[i - 1].x[0]);
    CHECK(!table.kappa_changed[i - 1]);
  }
}

TEST_CASE("kappa changes across a collision") {
  WorkingPrecision wp(80);
  const auto table = trajectory(symmetric(), {Real(-1), Real(0), Real(1)}, 2, 40);
  REQUIRE(table.kappa_changed.size() == 2);
  CHECK(table.kappa_changed[0]);
  CHECK(table.kappa_changed[1]);
  CHECK(table.rows[1].size() == 1);
}

TEST_CASE("finite ODE residuals") {
  WorkingPrecision wp(80);
  const auto r1 = ode_residual(one_point(), Real(1), 1, Real("1e-4"), 60);
  CHECK(r1.r_x <= Real("1e-7"));
  CHECK(r1.r_omega <= Real("1e-40"));
  auto second_order = [](const Real& a, const Real& b) { return b < Real("1e-40") || abs(log10(a / b) - 2) < Real("0.1"); };
  for (const std::string ts : {"-2", "0", "3"}) {
    for (std::size_t n = 1; n <= 2; ++n) {
      const auto a = ode_residual(two_point(), Real(ts), n, Real("1e-3"), 60);
      const auto b = ode_residual(two_point(), Real(ts), n, Real("1e-4"), 60);
      INFO("t=", ts, " n=", n);
      CHECK(b.r_x < Real("1e-7"));
      CHECK(b.r_omega < Real("1e-7"));
      CHECK(second_order(a.r_x, b.r_x));
      CHECK(second_order(a.r_omega, b.r_omega));
    }
  }
}

TEST_CASE("infinite ODE residual for the laguerre weight") {
  WorkingPrecision wp(60);
  const auto r = infinite_ode_residual(laguerre(R(0), R(1, 2)), Real(0), 1, 60, Real("1e-4"), 40);
  CHECK(r.r_x < Real("1e-6"));
  CHECK(r.r_omega < Real("1e-6"));
  CHECK(r.tail_estimate < Real("1e-8"));
}

TEST_CASE("moment derivatives") {
  WorkingPrecision wp(80);
  for (const auto& spec : {two_point(), laguerre(R(0), R(1, 2)), jacobi(R(0), R(0), R(1, 20))}) {
    for (int l : {0, 1, 3}) {
      const Real a = abs(moment_derivative_residual(spec, Real("0.5"), l, Real("1e-3"), 50));
      const Real b = abs(moment_derivative_residual(spec, Real("0.5"), l, Real("1e-4"), 50));
      INFO(kind_name(spec.kind), " l=", l);
      CHECK(b < Real("1e-7"));
      CHECK(abs(log10(a / b) - 2) < Real("0.1"));
    }
  }
}

TEST_CASE("collision scans") {
  WorkingPrecision wp(80);
  SUBCASE("positive measures never collide") {
    const auto r = collision_scan(two_point(), 1, Real(-10), Real(10), 40);
    CHECK(r.roots.empty());
    CHECK(r.complete);
  }
  SUBCASE("symmetric pair at t = 0") {
    const auto r = collision_scan(symmetric(), 1, Real(-5), Real(5), 40);
    REQUIRE(r.roots.size() == 1);
    CHECK(abs(r.roots[0].t) <= Real("1e-12"));
    CHECK(r.roots[0].lo <= r.roots[0].t);
    CHECK(r.roots[0].t <= r.roots[0].hi);
  }
  SUBCASE("crossing pair at log 64") {
    const auto r = collision_scan(crossing(), 1, Real(0), Real(10), 40);
    REQUIRE(r.roots.size() == 1);
    CHECK(abs(r.roots[0].t - log(Real(64))) <= Real("1e-12"));
    CHECK(r.roots[0].points == 1);
    CHECK(r.roots[0].upsilon_mass > 0);
  }
}

TEST_CASE("peakon ODE integration reaches the same collision") {
  WorkingPrecision wp(40);
  PeakonState s;
  s.q = {log(Real(16) / 65), log(Real(65) / 16)};
  s.p = {Real(65) / 63, Real(-65) / 63};
  const Real tc = two_peakon_collision_time(s, Real(10));
  CHECK(abs(tc - log(Real(64))) < Real("1e-6"));

  // Before the collision the RK4 state matches the spectral profile.
  const auto ode = integrate_peakons(s, Real(2), 2000);
  const auto snap = snapshot(crossing(), Real(2), 2, 30);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(abs(ode.q[j] - snap.profile.x[j]) < Real("1e-10"));
    CHECK(abs(ode.p[j] - snap.profile.omega[j]) < Real("1e-10"));
  }
}

TEST_CASE("accumulation point") {
  WorkingPrecision wp(60);
  const Real L0 = accumulation_L(two_point(), Real(0)).L;
  CHECK_REL(L0, Real(log(Real(5))), 55);
  for (const char* ts : {"-4", "3"}) {
    const Real t(ts);
    CHECK_REL(accumulation_L(two_point(), t).L, Real(log(4 * exp(t / 2) + exp(t / 4))), 55);
  }
  const Real big(400);
  CHECK(abs(accumulation_L(two_point(), big).L / big - Real("0.5")) < Real("1e-2"));

  const auto asc = accumulation_L(al_salam_carlitz(R(3, 2), R(1, 2)), Real(0), 60);
  CHECK(isfinite(asc.L));
  CHECK(asc.truncation_bound < Real("1e-6"));
}

TEST_CASE("total momentum") {
  WorkingPrecision wp(80);
  for (const char* ts : {"-5", "0", "5"}) {
    CHECK_REL(total_momentum(one_point(), Real(ts), 1, 50).value, R(1, 3), 45);
    CHECK_REL(total_momentum(two_point(), Real(ts), 2, 50).value, R(3, 2), 45);
  }
}

TEST_CASE("scaling residuals") {
  WorkingPrecision wp(80);
  const auto exact = exact_moments(finite_discrete({{R(-2), R(1, 3)}, {R(1, 2), R(5)}, {R(4), R(2, 7)}}), 4);
  const auto id = scaling_check(exact, R(1), R(1));
  CHECK(id.x == 0);
  CHECK(id.omega == 0);
  const auto e = scaling_check(exact, R(10), R(2));
  CHECK(e.x <= Real("1e-60"));
  CHECK(e.omega == 0);

  const auto table = moments(laguerre(R(0), R(1, 2)), Real(1), 8, 50);
  WorkingPrecision w2(table.work_digits);
  const auto r = scaling_check(table, R(10), R(2));
  CHECK(r.x <= pow10_neg(40));
  CHECK(r.omega <= pow10_neg(40));
}
