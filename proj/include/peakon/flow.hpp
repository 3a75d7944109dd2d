#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peakon/forward.hpp"

namespace peakon {

// Sampling grid a:b:step for u.
struct SampleGrid {
  Real a{0}, b{0}, step{1};

  // Parses "a:b:step" with exact decimals.
  static SampleGrid parse(const std::string& text);
  std::vector<Real> points() const;
};

struct Snapshot {
  PeakonProfile<Real> profile;
  PiecewiseSolution<Real> solution;
  std::vector<std::pair<Real, Real>> samples;  // (x, u) clipped to the known part of the line
};

// Moment order used for the first N peakons.
int order_for(std::size_t N);

Snapshot snapshot(const SpectralMeasureSpec& spec, const Real& t, std::size_t N, unsigned digits,
                  const std::optional<SampleGrid>& grid = std::nullopt);

struct TrajectoryTable {
  std::vector<Real> times;
  std::vector<PeakonProfile<Real>> rows;
  std::vector<bool> kappa_changed;  // between rows i and i+1
};

// Rows are computed one after another: the working precision is process global.
TrajectoryTable trajectory(const SpectralMeasureSpec& spec, const std::vector<Real>& times, std::size_t N,
                           unsigned digits);

// h = 10^{-digits/8} clamped to [1e-6, 1e-3].
Real default_step(unsigned digits);

struct OdeResidual {
  Real r_x{0};
  Real r_omega{0};
};

// Central differences of x_n and omega_n against u and the mean slope at x_n.
// Throws ComputationError when Delta_{1,k} vanishes at t or t +- h.
OdeResidual ode_residual(const SpectralMeasureSpec& spec, const Real& t, std::size_t n, const Real& h,
                         unsigned digits);

struct InfiniteOdeResidual {
  Real r_x{0};
  Real r_omega{0};
  Real tail_estimate{0};
};

// Right hand sides summed over the first N_trunc peakons.
InfiniteOdeResidual infinite_ode_residual(const SpectralMeasureSpec& spec, const Real& t, std::size_t n,
                                          std::size_t N_trunc, const Real& h, unsigned digits,
                                          double tail_tolerance = 1e-8);

// (s_l(t+h) - s_l(t-h)) / (2h) + s_{l-1}(t) / 2.
Real moment_derivative_residual(const SpectralMeasureSpec& spec, const Real& t, int l, const Real& h,
                                unsigned digits);

struct CollisionRoot {
  Real t{0};
  Real lo{0}, hi{0};       // final bracket
  Real upsilon_mass{0};    // dipole mass of the profile at t
  std::size_t points = 0;  // positions in the profile at t
};

struct CollisionReport {
  int k = 0;
  std::vector<CollisionRoot> roots;
  Real grid_step{0};
  std::size_t grid_points = 0;
  bool complete = true;  // false when the grid cannot certify all roots
  std::string note;
};

// Sign changes and zeros of Delta_{1,k}(t) on [t0, t1].
CollisionReport collision_scan(const SpectralMeasureSpec& spec, int k, const Real& t0, const Real& t1,
                               unsigned digits, const Real& tolerance = Real("1e-12"));

struct Accumulation {
  Real L{0};
  Real truncation_bound{0};
};

// L(t) = log sum e^{t/(2 lambda)} / (lambda^2 W'(lambda)^2 gamma).
Accumulation accumulation_L(const SpectralMeasureSpec& spec, const Real& t, std::size_t terms = 0);

struct Momentum {
  Real value{0};
  Real tail_bound{0};
};

Momentum total_momentum(const SpectralMeasureSpec& spec, const Real& t, std::size_t N_trunc, unsigned digits);

struct ScalingResidual {
  Real x{0};
  Real omega{0};
};

// Profile of c d^k s_k against x - log c and omega / d.
template <class T>
ScalingResidual scaling_check(const MomentTable<T>& table, const Rational& c, const Rational& d);

// Peakon ODE with u = (1/2) sum p_j e^{-|x - q_j|}.
struct PeakonState {
  std::vector<Real> q, p;
};

PeakonState peakon_rhs(const PeakonState& s);

// Classical RK4 with fixed step.
PeakonState integrate_peakons(PeakonState s, const Real& t_end, std::size_t steps);

// First time the gap between peakons 1 and 2 closes, integrating with steps
// proportional to the remaining time scale.
Real two_peakon_collision_time(PeakonState s, const Real& t_max, double step_fraction = 1e-3);

}  // namespace peakon
