#pragma once

#include <functional>
#include <vector>

#include "peakon/numeric.hpp"

namespace peakon {

// Vector integrand: receives the abscissa and its distances to the left and
// right end of the current panel (free of cancellation), fills `out`.
using VecIntegrand =
    std::function<void(const Real& x, const Real& dl, const Real& dr, std::vector<Real>& out)>;

struct QuadResult {
  std::vector<Real> value;
  std::vector<Real> error;  // last level difference, an overestimate
  std::size_t evaluations = 0;
};

// Tanh-sinh rule on [a, b]. Components are converged when the level
// difference is below rel_tol*|value_i| + floor_i.
QuadResult tanh_sinh(const VecIntegrand& f, const Real& a, const Real& b, std::size_t dim,
                     const Real& rel_tol, const std::vector<Real>& floor = {});

struct QuadNode {
  Real x, dl, dr, w;
};

// Fixed tanh-sinh rule with step 2^-level on [a, b], truncated where the
// weights fall below the working precision.
std::vector<QuadNode> tanh_sinh_rule(const Real& a, const Real& b, int level);

// Sum over panels [edges[i], edges[i+1]]. A panel whose contribution is
// negligible relative to the running total is integrated only to that
// absolute floor. The integrand sees
// distances to the outer ends edges.front() and edges.back().
QuadResult integrate_panels(const VecIntegrand& f, const std::vector<Real>& edges, std::size_t dim,
                            const Real& rel_tol);

// Panel edges on [a, b] refined geometrically towards each end whose first
// relative width is positive, doubling away from it.
std::vector<Real> graded_edges(const Real& a, const Real& b, const Real& w_left, const Real& w_right);

}  // namespace peakon
