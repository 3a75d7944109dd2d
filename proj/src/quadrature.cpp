#include "peakon/quadrature.hpp"

#include <algorithm>
#include <limits>

namespace peakon {

namespace {

constexpr int kMaxLevel = 14;
constexpr double kMaxAbscissa = 10.0;

using Node = QuadNode;

// Abscissa data for parameter u on the panel centred at c with half width hw.
Node make_node(const Real& u, const Real& a, const Real& b, const Real& hw, const Real& half_pi) {
  Real v = half_pi * sinh(u);
  Real e = exp(-2 * abs(v));  // e^{-2|v|}
  Real near = hw * 2 * e / (1 + e);
  Real far = hw * 2 / (1 + e);
  Node n;
  if (v < 0) {
    n.dl = near;
    n.dr = far;
    n.x = a + n.dl;
  } else {
    n.dl = far;
    n.dr = near;
    n.x = b - n.dr;
  }
  n.w = hw * half_pi * cosh(u) * 4 * e / ((1 + e) * (1 + e));
  return n;
}

bool negligible(const std::vector<Real>& term, const std::vector<Real>& sum, const std::vector<Real>& floor,
                const Real& eps) {
  for (std::size_t i = 0; i < term.size(); ++i) {
    Real bound = eps * abs(sum[i]);
    if (!floor.empty()) bound += floor[i];
    if (abs(term[i]) > bound) return false;
  }
  return true;
}

}  // namespace

QuadResult tanh_sinh(const VecIntegrand& f, const Real& a, const Real& b, std::size_t dim, const Real& rel_tol,
                     const std::vector<Real>& floor) {
  QuadResult res;
  res.value.assign(dim, Real(0));
  res.error.assign(dim, Real(0));
  if (!(b > a)) return res;
  const Real half_pi = pi() / 2;
  const Real hw = (b - a) / 2;
  const Real stop_eps = rel_tol * Real("1e-8");
  std::vector<Real> out(dim), term(dim);

  auto eval = [&](const Real& u, std::vector<Real>& acc) -> bool {
    Node n = make_node(u, a, b, hw, half_pi);
    if (n.dl == 0 || n.dr == 0 || n.w == 0) return false;
    f(n.x, n.dl, n.dr, out);
    ++res.evaluations;
    for (std::size_t i = 0; i < dim; ++i) {
      term[i] = n.w * out[i];
      acc[i] += term[i];
    }
    return true;
  };

  // Level 0 with h = 1/2 fixes the truncation of the u axis.
  Real h("0.5");
  std::vector<Real> sum(dim, Real(0));
  eval(Real(0), sum);
  int jmax[2] = {0, 0};
  for (int side = 0; side < 2; ++side) {
    const int sign = side == 0 ? -1 : 1;
    for (int j = 1;; ++j) {
      Real u = h * j * sign;
      if (abs(u) > kMaxAbscissa) break;
      jmax[side] = j;
      if (!eval(u, sum)) break;
      if (negligible(term, sum, floor, stop_eps)) break;
    }
  }
  const Real umax[2] = {h * jmax[0], h * jmax[1]};
  std::vector<Real> estimate(dim);
  for (std::size_t i = 0; i < dim; ++i) estimate[i] = sum[i] * h;

  for (int level = 1; level <= kMaxLevel; ++level) {
    h /= 2;
    std::vector<Real> fresh(dim, Real(0));
    for (int side = 0; side < 2; ++side) {
      const int sign = side == 0 ? -1 : 1;
      for (long j = 1;; j += 2) {
        Real u = h * j;
        if (u > umax[side]) break;
        if (!eval(u * sign, fresh)) break;
      }
    }
    bool done = level >= 3;
    for (std::size_t i = 0; i < dim; ++i) {
      sum[i] += fresh[i];
      Real next = sum[i] * h;
      res.error[i] = abs(next - estimate[i]);
      Real bound = rel_tol * abs(next);
      if (!floor.empty()) bound += floor[i];
      if (res.error[i] > bound) done = false;
      estimate[i] = next;
    }
    if (done) {
      res.value = estimate;
      return res;
    }
  }
  throw ComputationError("tanh-sinh quadrature did not converge");
}

std::vector<QuadNode> tanh_sinh_rule(const Real& a, const Real& b, int level) {
  const Real half_pi = pi() / 2;
  const Real hw = (b - a) / 2;
  const Real h = pow(Real(2), -level);
  const Real tiny = pow10_neg(current_digits() + 5) * hw;
  std::vector<QuadNode> nodes;
  for (long j = 0;; ++j) {
    Real u = h * j;
    if (u > kMaxAbscissa) break;
    bool any = false;
    for (int sign : {1, -1}) {
      if (j == 0 && sign < 0) continue;
      Node n = make_node(u * sign, a, b, hw, half_pi);
      if (n.w < tiny || n.dl == 0 || n.dr == 0) continue;
      n.w *= h;
      nodes.push_back(n);
      any = true;
    }
    if (!any) break;
  }
  return nodes;
}

QuadResult integrate_panels(const VecIntegrand& f, const std::vector<Real>& edges, std::size_t dim,
                            const Real& rel_tol) {
  QuadResult total;
  total.value.assign(dim, Real(0));
  total.error.assign(dim, Real(0));
  if (edges.size() < 2) return total;
  const std::size_t panels = edges.size() - 1;

  // Visit panels by decreasing midpoint estimate so that small panels can use
  // the running total as an absolute floor.
  std::vector<Real> probe(dim);
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t p = 0; p < panels; ++p) {
    Real mid = (edges[p] + edges[p + 1]) / 2;
    Real half = (edges[p + 1] - edges[p]) / 2;
    f(mid, (edges[p] - edges.front()) + half, (edges.back() - edges[p + 1]) + half, probe);
    double est = -std::numeric_limits<double>::max();
    for (const Real& v : probe) est = std::max(est, log10_abs(v * half));
    order.emplace_back(-est, p);
  }
  std::stable_sort(order.begin(), order.end());

  std::vector<Real> floor(dim);
  const Real shrink("1e-3");
  for (const auto& [unused, p] : order) {
    (void)unused;
    for (std::size_t i = 0; i < dim; ++i) floor[i] = rel_tol * shrink * abs(total.value[i]);
    const Real off_l = edges[p] - edges.front();
    const Real off_r = edges.back() - edges[p + 1];
    VecIntegrand g = [&](const Real& x, const Real& dl, const Real& dr, std::vector<Real>& out) {
      f(x, off_l + dl, off_r + dr, out);
    };
    QuadResult part = tanh_sinh(g, edges[p], edges[p + 1], dim, rel_tol, floor);
    total.evaluations += part.evaluations;
    for (std::size_t i = 0; i < dim; ++i) {
      total.value[i] += part.value[i];
      total.error[i] += part.error[i];
    }
  }
  return total;
}

std::vector<Real> graded_edges(const Real& a, const Real& b, const Real& w_left, const Real& w_right) {
  const Real len = b - a;
  const bool both = w_left > 0 && w_right > 0;
  // Offsets measured from each refined end, doubling until they meet.
  const Real limit = both ? Real(len / 2) : len;
  std::vector<Real> edges{a, b};
  if (both) edges.push_back(a + len / 2);
  if (w_left > 0) {
    for (Real d = w_left * len; d < limit; d *= 2) edges.push_back(a + d);
  }
  if (w_right > 0) {
    for (Real d = w_right * len; d < limit; d *= 2) edges.push_back(b - d);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace peakon
