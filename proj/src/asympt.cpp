#include "peakon/asympt.hpp"

#include <ostream>

namespace peakon {

namespace {

Real lgam(const Real& x) { return log_gamma(x); }

// log prod_{j<n} j!
Real log_superfactorial(int n) {
  Real s(0);
  for (int j = 2; j < n; ++j) s += lgam(Real(j + 1));
  return s;
}

void check_n(std::size_t n) {
  if (n == 0) throw ValidationError("peakon index is 1-based");
}

void check_t(const Real& t) {
  if (t == 0) throw ValidationError("long-time predictions need t != 0");
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::PlusInfinity: return "t->+inf";
    case Regime::MinusInfinity: return "t->-inf";
    case Regime::LargeN: return "n->inf";
  }
  return "?";
}

PeakonPrediction DiscreteAsymptote::at(const Real& t) const {
  PeakonPrediction p;
  p.regime = Regime::MinusInfinity;
  p.x = speed * t + constant;
  p.omega = omega_limit;
  p.note = "exponentially small error";
  return p;
}

DiscreteAsymptote predict_discrete(const std::vector<std::pair<Real, Real>>& prefix, std::size_t n) {
  check_n(n);
  if (n > prefix.size()) throw ValidationError("peakon index beyond the spectrum prefix");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(prefix[i].first > 0) || !(prefix[i].second > 0)) throw ValidationError("eigenvalues and masses must be positive");
    if (i > 0 && !(prefix[i].first > prefix[i - 1].first)) throw ValidationError("eigenvalues must increase");
  }
  const Real& ln = prefix[n - 1].first;
  DiscreteAsymptote d;
  d.speed = 1 / (2 * ln);
  d.constant = -log(prefix[n - 1].second);
  for (std::size_t i = 0; i + 1 < n; ++i) d.constant -= 2 * log(ln / prefix[i].first - 1);
  d.omega_limit = 1 / ln;
  return d;
}

DiscreteTrend discrete_plus_trend(const TrajectoryTable& table, std::size_t n) {
  check_n(n);
  DiscreteTrend tr{true, true, true};
  if (table.rows.size() < 2) return DiscreteTrend{};
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    if (a.omega.size() < n || b.omega.size() < n) throw ValidationError("rows have fewer than n peakons");
    if (!(table.times[i - 1] > 0)) throw ValidationError("trend check needs positive times");
    tr.diverging = tr.diverging && b.x[n - 1] > a.x[n - 1];
    tr.sublinear = tr.sublinear && b.x[n - 1] / table.times[i] < a.x[n - 1] / table.times[i - 1];
    tr.fading = tr.fading && abs(b.omega[n - 1]) < abs(a.omega[n - 1]);
  }
  return tr;
}

PeakonPrediction predict_laguerre_profile(std::size_t n, const Rational& gamma, const Rational& alpha) {
  check_n(n);
  const Real g = to_real(gamma), a = to_real(alpha);
  const Real root = sqrt(a * static_cast<long>(n));
  PeakonPrediction p;
  p.regime = Regime::LargeN;
  p.x = 4 * root + lgam(g + 1) - log(8 * pi()) - (g + 1) * log(a) - a;
  p.omega = 1 / (2 * root);
  p.note = "x error O(n^-1/2), omega error O(n^-1)";
  return p;
}

PeakonPrediction predict_laguerre_longtime(std::size_t n, const Real& t, const Rational& gamma,
                                           const Rational& alpha, const Real& h_at_inf, const Real& h_at_alpha) {
  check_n(n);
  check_t(t);
  const Real g = to_real(gamma), a = to_real(alpha);
  const long nl = static_cast<long>(n);
  PeakonPrediction p;
  if (t > 0) {
    p.regime = Regime::PlusInfinity;
    const Real s = sqrt(2 * t);
    p.omega = sqrt(2 / t);
    p.x = s + (nl - g - Real(3) / 2) * log(s) + (g + 1) * log(Real(2)) + lgam(g + 1) - log(2 * pi()) / 2 - a -
          log(h_at_inf) - lgam(Real(nl));
  } else {
    p.regime = Regime::MinusInfinity;
    p.omega = 1 / a;
    p.x = t / (2 * a) + (2 * nl - 1 + g) * log(abs(t) / (2 * a)) -
          ((1 + g) * log(a) + log(h_at_alpha) + lgam(nl + g) + lgam(Real(nl)) - lgam(g + 1));
  }
  return p;
}

Real predict_laguerre_hankel(int k, int n, const Real& t, const Rational& gamma, const Rational& alpha) {
  check_t(t);
  if (n < 0) throw ValidationError("Hankel order must be >= 0");
  if (n == 0) return Real(1);
  const Real g = to_real(gamma), a = to_real(alpha);
  Real lv;
  if (t > 0) {
    const Real s = sqrt(2 * t);
    const Real logd = n * log(2 * pi()) / 2 + a * n - n * (n + k + g) * log(Real(2)) + log_superfactorial(n) -
                      n * lgam(g + 1);
    lv = -n * s + n * (n + 2 * k + 2 * g) / 2 * log(s) + logd;
  } else {
    Real logd = n * (n + k + g) * log(a);
    for (int j = 0; j < n; ++j) logd += 2 * lgam(Real(j + 1)) + lgam(g + j + 1) - lgam(g + 1) - lgam(Real(j + 1));
    lv = n * abs(t) / (2 * a) - n * (n + g) * log(abs(t) / (2 * a)) + logd;
  }
  return exp(lv);
}

Real laguerre_gap_constant(std::size_t n, const Real& t, const Rational& gamma, const Rational& alpha) {
  check_n(n);
  check_t(t);
  const Real g = to_real(gamma), a = to_real(alpha);
  const long nl = static_cast<long>(n);
  if (t > 0) return -log(Real(nl));
  return -log(4 * a * a * nl * (nl + g));
}

JacobiProfilePrediction predict_jacobi_profile(std::size_t n, const Rational& a, const Rational& b,
                                               const Rational& alpha) {
  check_n(n);
  const Real ar = to_real(a), br = to_real(b), al = to_real(alpha);
  const Real r = sqrt(al * (1 + al));
  const Real base = log(1 + 2 * al + 2 * r);
  JacobiProfilePrediction out;
  out.peakon.regime = Regime::LargeN;
  out.peakon.omega = 1 / r;
  out.peakon.x = (2 * static_cast<long>(n) + ar + br) * base - log(8 * pi()) - (br + 1) * log(al) -
                 (ar + 1) * log(1 + al);
  out.period = 2 * base;
  return out;
}

PeakonPrediction predict_jacobi_longtime(std::size_t n, const Real& t, const Rational& a, const Rational& b,
                                         const Rational& alpha) {
  check_n(n);
  check_t(t);
  const Real ar = to_real(a), br = to_real(b), al = to_real(alpha);
  const long nl = static_cast<long>(n);
  PeakonPrediction p;
  if (t > 0) {
    p.regime = Regime::PlusInfinity;
    const Real edge = 1 + al;
    p.omega = 1 / edge;
    p.x = t / (2 * edge) + (2 * nl + ar - 1) * log(t / (2 * edge)) -
          ((ar + 1) * log(edge) + lgam(Real(nl)) + lgam(nl + ar));
  } else {
    p.regime = Regime::MinusInfinity;
    p.omega = 1 / al;
    p.x = t / (2 * al) + (2 * nl + br - 1) * log(abs(t) / (2 * al)) -
          ((br + 1) * log(al) + lgam(Real(nl)) + lgam(nl + br));
  }
  return p;
}

Real predict_jacobi_hankel(int k, int n, const Real& t, const Rational& a, const Rational& b,
                           const Rational& alpha) {
  check_t(t);
  if (n < 0) throw ValidationError("Hankel order must be >= 0");
  if (n == 0) return Real(1);
  const Real al = to_real(alpha);
  const Real e = t > 0 ? to_real(a) : to_real(b);
  const Real edge = t > 0 ? Real(1 + al) : al;
  Real lv = -n * t / (2 * edge) - n * (n + e) * log(abs(t)) + n * (n + e) * log(Real(2)) +
            n * (2 * n + 2 * e + k) * log(edge);
  for (int j = 0; j < n; ++j) lv += lgam(Real(j + 1)) + lgam(j + e + 1);
  return exp(lv);
}

Real jacobi_gap_constant(std::size_t n, const Real& t, const Rational& a, const Rational& b, const Rational& alpha) {
  check_n(n);
  check_t(t);
  const Real al = to_real(alpha);
  const long nl = static_cast<long>(n);
  if (t > 0) return -log(4 * (1 + al) * (1 + al) * (nl * nl + to_real(a) * nl));
  return -log(4 * al * al * (nl * nl + to_real(b) * nl));
}

AscPeakon asc_profile(std::size_t n, const Rational& a, const Rational& q) {
  check_n(n);
  if (!(q > 0 && q < 1 && a > 1 && a * q < 1)) throw ValidationError("al_salam_carlitz needs 0 < q < 1 < a < 1/q");
  // qq runs through (q;q)_k, ending at (q;q)_{n-1}.
  Rational sum(0), qq(1), aqk(1), qk(1), an(1);
  for (std::size_t k = 0; k < n; ++k) {
    sum += aqk / qq;
    aqk *= a * q;
    an *= a;
    if (k + 1 < n) {
      qk *= q;
      qq *= 1 - qk;
    }
  }
  AscPeakon p;
  p.xt = sum;
  p.omega = qq / an * sum;
  p.x = log(to_real(sum));
  return p;
}

Real asc_limit(const Rational& a, const Rational& q) {
  if (!(q > 0 && q < 1 && a > 1 && a * q < 1)) throw ValidationError("al_salam_carlitz needs 0 < q < 1 < a < 1/q");
  const Real qr = to_real(q);
  return -log(q_pochhammer_inf(to_real(a) * qr, qr));
}

std::vector<ComparisonRow> compare(const TrajectoryTable& table, const Predictor& predict) {
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& p = table.rows[i];
    const Real& t = table.times[i];
    for (std::size_t n = 1; n <= p.omega.size(); ++n) {
      const PeakonPrediction pr = predict(n, t);
      auto push = [&](const char* q, const Real& c, const Real& v) {
        ComparisonRow r;
        r.quantity = q;
        r.n = n;
        r.t = t;
        r.computed = c;
        r.predicted = v;
        r.abs_err = abs(c - v);
        r.rel_err = v != 0 ? Real(r.abs_err / abs(v)) : r.abs_err;
        rows.push_back(std::move(r));
      };
      push("x", p.x[n - 1], pr.x);
      push("omega", p.omega[n - 1], pr.omega);
    }
  }
  return rows;
}

Real error_trend(const std::vector<ComparisonRow>& rows, const std::string& quantity, std::size_t n) {
  std::vector<std::pair<Real, Real>> pts;
  for (const auto& r : rows) {
    if (r.quantity != quantity || r.n != n || r.t == 0 || r.abs_err == 0) continue;
    pts.emplace_back(log(abs(r.t)), log(r.abs_err));
  }
  if (pts.size() < 2) throw ValidationError("error trend needs two points with nonzero error");
  Real mx(0), my(0);
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  Real sxy(0), sxx(0);
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) throw ValidationError("error trend needs distinct |t|");
  return sxy / sxx;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, int digits) {
  out << "quantity,n,t,computed,predicted,abs_err,rel_err\n";
  for (const auto& r : rows) {
    out << r.quantity << ',' << r.n << ',' << to_decimal(r.t, digits) << ',' << to_decimal(r.computed, digits)
        << ',' << to_decimal(r.predicted, digits) << ',' << to_decimal(r.abs_err, digits) << ','
        << to_decimal(r.rel_err, digits) << '\n';
  }
}

}  // namespace peakon
