#include "peakon/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

namespace peakon::cli {

using nlohmann::json;

TimeValue TimeValue::parse(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  TimeValue v;
  const auto lp = text.find("log(");
  if (lp == std::string::npos) {
    v.coeff = parse_rational(text);
    return v;
  }
  if (text.back() != ')') throw ValidationError("bad time value '" + raw + "'");
  std::string head = text.substr(0, lp);
  if (head.empty() || head == "+") {
    v.coeff = 1;
  } else if (head == "-") {
    v.coeff = -1;
  } else {
    if (head.back() != '*') throw ValidationError("bad time value '" + raw + "'");
    v.coeff = parse_rational(head.substr(0, head.size() - 1));
  }
  v.log_arg = parse_rational(text.substr(lp + 4, text.size() - lp - 5));
  if (*v.log_arg <= 0) throw ValidationError("log argument must be positive in '" + raw + "'");
  return v;
}

Real TimeValue::value() const {
  Real c = to_real(coeff);
  if (log_arg) c *= log(to_real(*log_arg));
  return c;
}

std::vector<TimeValue> parse_times(const std::string& text) {
  std::vector<TimeValue> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("time grid must be a:b:step");
    const Rational a = parse_rational(parts[0]), b = parse_rational(parts[1]), step = parse_rational(parts[2]);
    if (step <= 0 || b < a) throw ValidationError("time grid needs a <= b and step > 0");
    if ((b - a) / step > 100000) throw ValidationError("time grid has too many points");
    for (Rational t = a; t <= b; t += step) out.push_back(TimeValue{t, std::nullopt});
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(TimeValue::parse(p));
  }
  if (out.empty()) throw ValidationError("empty time grid");
  return out;
}

unsigned resolve_digits(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PEAKON_DIGITS")) {
    try {
      std::size_t used = 0;
      const long v = std::stol(env, &used);
      if (used != std::string(env).size() || v <= 0) throw std::invalid_argument(env);
      return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw ValidationError(std::string("PEAKON_DIGITS is not a positive integer: '") + env + "'");
    }
  }
  return 200;
}

namespace {

const std::vector<std::string> kCommands = {"snapshot", "trajectory", "verify", "collide", "asympt", "roundtrip"};
const std::vector<std::string> kSuites = {"identities", "ode", "roundtrip", "scaling", "conservation", "asympt"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<Real> time_values(const std::vector<TimeValue>& times) {
  std::vector<Real> out;
  for (const auto& t : times) out.push_back(t.value());
  return out;
}

}  // namespace

void check_config(const RunConfig& cfg) {
  if (!contains(kCommands, cfg.command)) throw ValidationError("unknown command '" + cfg.command + "'");
  if (cfg.digits < 30) throw ValidationError("digits must be at least 30");
  if (cfg.n_peaks < 1) throw ValidationError("n-peaks must be at least 1");
  if (cfg.format != "csv" && cfg.format != "json") throw ValidationError("format must be csv or json");
  if (!cfg.preset.empty() && cfg.preset != "paper-300-terms") {
    throw ValidationError("unknown preset '" + cfg.preset + "'");
  }
  if (cfg.command == "verify" && !contains(kSuites, cfg.suite)) {
    throw ValidationError("unknown verify suite '" + cfg.suite + "'");
  }
  if (cfg.k < 1) throw ValidationError("k must be at least 1");
  WorkingPrecision wp(60);
  const auto tv = time_values(cfg.times);
  for (std::size_t i = 1; i < tv.size(); ++i) {
    if (!(tv[i] > tv[i - 1])) throw ValidationError("time grid must be strictly increasing");
  }
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 1;
  if (dynamic_cast<const ComputationError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  return 2;
}

namespace {

SpectralMeasureSpec measure_of(const RunConfig& cfg) {
  SpectralMeasureSpec spec;
  if (!cfg.measure.empty()) {
    spec = measure_from_json(load_json(cfg.measure));
  } else if (!cfg.profile.empty()) {
    const PeakonInput in = peakons_from_json(load_json(cfg.profile), cfg.digits);
    const auto p = profile_from_peakons<Rational>(in.xt, in.omega);
    spec = measure_from_weyl(weyl_from_string(string_from_profile(p)), cfg.digits);
  } else {
    throw ValidationError("--measure or --profile is required");
  }
  if (cfg.preset == "paper-300-terms") spec.fixed_terms = 300;
  return spec;
}

bool exact_discrete(const SpectralMeasureSpec& spec) {
  if (spec.kind != MeasureKind::FiniteDiscrete) return false;
  return std::all_of(spec.atoms.begin(), spec.atoms.end(),
                     [](const Atom& a) { return a.lambda_q.has_value() && a.gamma_q.has_value(); });
}

class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& fallback) : dir_(cfg.out_dir), fallback_(fallback) {
    if (dir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create '" + dir_ + "': " + ec.message());
  }

  bool to_files() const { return !dir_.empty(); }

  // Writes `body` to dir/name, or to the fallback stream when no directory was given.
  void write(const std::string& name, const std::string& body) {
    if (dir_.empty()) {
      fallback_ << body;
      return;
    }
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << body;
    if (!f) throw IoError("write failed for '" + path.string() + "'");
  }

 private:
  std::string dir_;
  std::ostream& fallback_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sci(const Real& x) { return to_decimal(x, 6); }

int digits_out(const RunConfig& cfg) { return static_cast<int>(cfg.digits); }

std::vector<TimeValue> times_or(const RunConfig& cfg, std::vector<TimeValue> fallback) {
  return cfg.times.empty() ? fallback : cfg.times;
}

std::vector<TimeValue> literal_times(std::initializer_list<const char*> ts) {
  std::vector<TimeValue> out;
  for (const char* t : ts) out.push_back(TimeValue::parse(t));
  return out;
}

void cmd_snapshot(const RunConfig& cfg, Sink& sink) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const int od = digits_out(cfg);
  std::optional<SampleGrid> grid;
  if (cfg.grid) grid = SampleGrid::parse(*cfg.grid);
  std::ostringstream csv;
  write_profile_header(csv);
  json all = json::array();
  std::vector<std::string> u_files;
  const auto times = times_or(cfg, {TimeValue{}});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Snapshot s = snapshot(spec, times[i].value(), cfg.n_peaks, cfg.digits, grid);
    write_profile_rows(csv, s.profile, od);
    if (cfg.format == "json") {
      json j = profile_to_json(s.profile, od);
      if (grid) {
        json u = json::array();
        for (const auto& [x, v] : s.samples) u.push_back({to_decimal(x, od), to_decimal(v, od)});
        j["u"] = u;
      }
      all.push_back(j);
    } else if (grid && sink.to_files()) {
      std::ostringstream u;
      write_solution_csv(u, s.samples, od);
      u_files.push_back("u_" + std::to_string(i) + ".csv");
      sink.write(u_files.back(), u.str());
    }
    if (cfg.dump_grid && sink.to_files()) {
      WorkingPrecision wp(s.profile.work_digits);
      const auto table = moments(spec, times[i].value(), order_for(cfg.n_peaks), cfg.digits);
      std::ostringstream g;
      write_grid_csv(g, build_grid(table), od);
      sink.write("grid_" + std::to_string(i) + ".csv", g.str());
    }
  }
  if (cfg.format == "json") {
    sink.write("snapshot.json", dump(json{{"measure", measure_to_json(spec)}, {"snapshots", all}}));
  } else {
    sink.write("peakons.csv", csv.str());
  }
  if (cfg.gnuplot && sink.to_files() && !u_files.empty()) {
    std::ostringstream gp;
    gp << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\nset ylabel 'u'\nplot";
    for (std::size_t i = 0; i < u_files.size(); ++i) {
      gp << (i ? ", \\\n    " : " ") << "'" << u_files[i] << "' using 1:2 with lines title 't" << i << "'";
    }
    gp << "\n";
    sink.write("snapshot.gp", gp.str());
  }
}

void cmd_trajectory(const RunConfig& cfg, Sink& sink) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const int od = digits_out(cfg);
  const auto tt = trajectory(spec, time_values(times_or(cfg, {TimeValue{}})), cfg.n_peaks, cfg.digits);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& r : tt.rows) rows.push_back(profile_to_json(r, od));
    json changes = json::array();
    for (bool c : tt.kappa_changed) changes.push_back(c);
    sink.write("trajectory.json", dump(json{{"measure", measure_to_json(spec)}, {"rows", rows}, {"kappa_changed", changes}}));
  } else {
    std::ostringstream csv;
    write_profile_header(csv);
    for (const auto& r : tt.rows) write_profile_rows(csv, r, od);
    sink.write("trajectory.csv", csv.str());
  }
  if (cfg.gnuplot && sink.to_files() && cfg.format == "csv") {
    std::ostringstream gp;
    gp << "set datafile separator ','\nset xlabel 't'\nset ylabel 'x_n'\nplot";
    for (std::size_t n = 1; n <= cfg.n_peaks; ++n) {
      gp << (n > 1 ? ", \\\n    " : " ") << "'trajectory.csv' every ::1 using 1:($2==" << n
         << " ? $3 : 1/0) with linespoints title 'n=" << n << "'";
    }
    gp << "\n";
    sink.write("trajectory.gp", gp.str());
  }
}

std::pair<Rational, Rational> parse_window(const std::string& text) {
  const auto c = text.find(':');
  if (c == std::string::npos) throw ValidationError("window must be a:b");
  const Rational a = parse_rational(text.substr(0, c)), b = parse_rational(text.substr(c + 1));
  if (!(b > a)) throw ValidationError("window needs a < b");
  return {a, b};
}

void cmd_collide(const RunConfig& cfg, Sink& sink) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const auto [a, b] = parse_window(cfg.window);
  WorkingPrecision wp(cfg.digits + 20);
  const CollisionReport r = collision_scan(spec, cfg.k, to_real(a), to_real(b), cfg.digits);
  sink.write("collision.json", dump(collision_to_json(r, digits_out(cfg))));
}

Predictor predictor_for(const SpectralMeasureSpec& spec, std::size_t n_max) {
  switch (spec.kind) {
    case MeasureKind::Laguerre:
      return [g = spec.p1, al = spec.p2](std::size_t n, const Real& t) {
        return predict_laguerre_longtime(n, t, g, al);
      };
    case MeasureKind::Jacobi:
      return [a = spec.p1, b = spec.p2, al = spec.p3](std::size_t n, const Real& t) {
        return predict_jacobi_longtime(n, t, a, b, al);
      };
    case MeasureKind::FiniteDiscrete:
    case MeasureKind::AlSalamCarlitz: {
      if (!spec.positive_support()) throw ValidationError("asymptotics need a measure on the positive half line");
      std::vector<std::pair<Real, Real>> prefix;
      const auto atoms = spec.kind == MeasureKind::AlSalamCarlitz ? asc_atoms(spec.p1, spec.p2, n_max) : spec.atoms;
      for (const auto& at : atoms) prefix.emplace_back(at.lambda, at.gamma);
      std::sort(prefix.begin(), prefix.end());
      return [prefix](std::size_t n, const Real& t) {
        if (n > prefix.size()) throw ValidationError("not enough atoms for peakon " + std::to_string(n));
        return predict_discrete(prefix, n).at(t);
      };
    }
    case MeasureKind::StieltjesWigert:
      break;
  }
  throw ValidationError("no long-time predictor for " + kind_name(spec.kind));
}

std::vector<TimeValue> default_asympt_times(const SpectralMeasureSpec& spec) {
  if (spec.is_discrete()) return literal_times({"-200", "-100", "-50"});
  return literal_times({"100", "1000", "10000"});
}

std::vector<ComparisonRow> comparison(const RunConfig& cfg, const SpectralMeasureSpec& spec,
                                      TrajectoryTable* table_out) {
  const auto times = times_or(cfg, default_asympt_times(spec));
  WorkingPrecision wp(cfg.digits + 20);
  const Predictor predict = predictor_for(spec, cfg.n_peaks);
  TrajectoryTable tt = trajectory(spec, time_values(times), cfg.n_peaks, cfg.digits);
  auto rows = compare(tt, predict);
  if (table_out) *table_out = std::move(tt);
  return rows;
}

void cmd_asympt(const RunConfig& cfg, Sink& sink) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const int od = digits_out(cfg);
  TrajectoryTable tt;
  const auto rows = comparison(cfg, spec, &tt);
  std::ostringstream cmp;
  write_comparison_csv(cmp, rows, od);
  sink.write("comparison.csv", cmp.str());
  if (sink.to_files()) {
    std::ostringstream traj;
    write_profile_header(traj);
    for (const auto& r : tt.rows) write_profile_rows(traj, r, od);
    sink.write("trajectory.csv", traj.str());
  }
}

Real max_rel(const std::vector<Real>& a, const std::vector<Real>& b) {
  if (a.size() != b.size()) return Real(1);
  Real w(0);
  for (std::size_t i = 0; i < a.size(); ++i) w = max(w, rel_diff(a[i], b[i]));
  return w;
}

struct RoundTrip {
  SpectralMeasureSpec measure;
  PeakonProfile<Real> recovered;
  Real profile_err{0};  // inverse(forward(profile)) vs profile
  Real measure_err{0};  // forward(inverse(measure)) vs measure
};

// Profile -> measure -> profile -> measure.
RoundTrip round_trip(const PeakonInput& in, unsigned digits) {
  RoundTrip rt;
  const auto p = profile_from_peakons<Rational>(in.xt, in.omega);
  rt.measure = measure_from_weyl(weyl_from_string(string_from_profile(p)), digits);
  const std::size_t N = in.xt.size();
  rt.recovered = peakon_profile(build_grid(moments(rt.measure, Real(0), static_cast<int>(N) + 1, digits)));
  WorkingPrecision wp(digits + 20);
  std::vector<Real> want, got;
  for (std::size_t n = 0; n < N; ++n) {
    want.push_back(to_real(in.xt[n]));
    want.push_back(to_real(in.omega[n]));
  }
  for (std::size_t n = 0; n < rt.recovered.size() && n < rt.recovered.omega.size(); ++n) {
    got.push_back(rt.recovered.xt[n]);
    got.push_back(rt.recovered.omega[n]);
  }
  rt.profile_err = max_rel(want, got);
  const auto back = measure_from_weyl(weyl_from_string(string_from_profile(rt.recovered)), digits);
  want.clear();
  got.clear();
  for (const auto& a : rt.measure.atoms) {
    want.push_back(a.lambda);
    want.push_back(a.gamma);
  }
  for (const auto& a : back.atoms) {
    got.push_back(a.lambda);
    got.push_back(a.gamma);
  }
  rt.measure_err = max_rel(want, got);
  return rt;
}

PeakonInput random_profile(std::mt19937_64& rng, std::size_t N) {
  std::uniform_int_distribution<int> num(1, 20), den(1, 9);
  PeakonInput in;
  Rational x(Rational(num(rng), den(rng)));
  for (std::size_t n = 0; n < N; ++n) {
    in.xt.push_back(x);
    in.omega.push_back(Rational(num(rng), den(rng)));
    in.upsilon.push_back(0);
    x += Rational(num(rng), den(rng));
  }
  return in;
}

void cmd_roundtrip(const RunConfig& cfg, Sink& sink) {
  const int od = digits_out(cfg);
  json j;
  if (!cfg.profile.empty()) {
    const PeakonInput in = peakons_from_json(load_json(cfg.profile), cfg.digits);
    const RoundTrip rt = round_trip(in, cfg.digits);
    WorkingPrecision wp(cfg.digits + 20);
    j["measure"] = measure_to_json(rt.measure);
    j["recovered"] = profile_to_json(rt.recovered, od);
    j["profile_rel_err"] = sci(rt.profile_err);
    j["measure_rel_err"] = sci(rt.measure_err);
  } else {
    const SpectralMeasureSpec spec = measure_of(cfg);
    if (spec.kind != MeasureKind::FiniteDiscrete) {
      throw ValidationError("roundtrip needs a finite discrete measure or a peakon profile");
    }
    const TimeValue t0 = cfg.times.empty() ? TimeValue{} : cfg.times.front();
    const Snapshot s = snapshot(spec, t0.value(), spec.atoms.size(), cfg.digits);
    WorkingPrecision wp(cfg.digits + 20);
    const auto back = measure_from_weyl(weyl_from_string(string_from_profile(s.profile)), cfg.digits);
    std::vector<Real> want, got;
    auto ordered = [](std::vector<Atom> atoms) {
      std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.lambda < b.lambda; });
      return atoms;
    };
    for (const auto& a : ordered(spec.atoms)) {
      want.push_back(a.lambda);
      want.push_back(a.gamma * exp(-t0.value() / (2 * a.lambda)));
    }
    for (const auto& a : ordered(back.atoms)) {
      got.push_back(a.lambda);
      got.push_back(a.gamma);
    }
    j["profile"] = profile_to_json(s.profile, od);
    j["measure"] = measure_to_json(back);
    j["measure_rel_err"] = sci(max_rel(want, got));
  }
  sink.write("roundtrip.json", dump(j));
}

// Verification suites.

Check make_check(std::string name, const Real& residual, const Real& tol, bool extra = true, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tol;
  c.pass = extra && residual <= tol;
  c.detail = std::move(detail);
  return c;
}

Check failed_check(std::string name, const std::exception& e) {
  Check c;
  c.name = std::move(name);
  c.residual = 1;
  c.pass = false;
  c.detail = e.what();
  return c;
}

std::string label(const std::string& base, const TimeValue& t) {
  std::string s = base + " t=" + t.coeff.str();
  if (t.log_arg) s += "*log(" + t.log_arg->str() + ")";
  return s;
}

void suite_identities(const RunConfig& cfg, VerifyReport& rep) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const int K = order_for(cfg.n_peaks);
  for (const auto& tv : times_or(cfg, {TimeValue{}})) {
    try {
      if (exact_discrete(spec) && tv.coeff == 0) {
        const auto grid = build_grid(exact_moments(spec, K));
        const auto r = identity_residuals(grid);
        rep.checks.push_back(make_check(label("identities exact", tv), r.worst(), Real(0), true,
                                        std::to_string(r.checked) + " identities"));
      } else {
        const auto table = moments(spec, tv.value(), K, cfg.digits);
        WorkingPrecision wp(table.work_digits);
        const auto r = identity_residuals(build_grid(table));
        rep.checks.push_back(make_check(label("identities", tv), r.worst(), pow10_neg(cfg.digits / 2.0), true,
                                        std::to_string(r.checked) + " identities"));
      }
    } catch (const ComputationError& e) {
      rep.checks.push_back(failed_check(label("identities", tv), e));
    }
  }
}

void suite_ode(const RunConfig& cfg, VerifyReport& rep) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  WorkingPrecision wp(cfg.digits + 20);
  const Real h1("1e-3"), h2("1e-4"), cap("1e-6");
  const Real floor = pow10_neg(cfg.digits / 4.0);
  for (const auto& tv : times_or(cfg, {TimeValue{}})) {
    const Real t = tv.value();
    for (std::size_t n = 1; n <= cfg.n_peaks; ++n) {
      const std::string name = label("ode n=" + std::to_string(n), tv);
      try {
        const OdeResidual a = ode_residual(spec, t, n, h1, cfg.digits);
        const OdeResidual b = ode_residual(spec, t, n, h2, cfg.digits);
        auto add = [&](const char* q, const Real& ra, const Real& rb) {
          const bool at_floor = rb <= floor;
          const Real slope = at_floor ? Real(2) : Real(log10(ra / rb));
          const bool ok = at_floor || abs(slope - 2) <= Real("0.1");
          rep.checks.push_back(make_check(name + " " + q, rb, cap, ok, "slope " + to_decimal(slope, 4)));
        };
        add("x", a.r_x, b.r_x);
        add("omega", a.r_omega, b.r_omega);
      } catch (const ComputationError& e) {
        rep.checks.push_back(failed_check(name, e));
      }
    }
  }
}

void suite_roundtrip(const RunConfig& cfg, VerifyReport& rep) {
  WorkingPrecision wp(cfg.digits + 20);
  const Real tol("1e-20");
  std::vector<std::pair<std::string, PeakonInput>> cases;
  if (!cfg.profile.empty()) {
    cases.emplace_back("profile", peakons_from_json(load_json(cfg.profile), cfg.digits));
  } else {
    std::mt19937_64 rng(cfg.seed);
    const std::size_t nmax = std::min<std::size_t>(cfg.n_peaks, 6);
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const std::size_t N = 1 + static_cast<std::size_t>(rng() % nmax);
      cases.emplace_back("random " + std::to_string(i) + " N=" + std::to_string(N), random_profile(rng, N));
    }
  }
  for (const auto& [name, in] : cases) {
    try {
      const RoundTrip rt = round_trip(in, cfg.digits);
      rep.checks.push_back(make_check("roundtrip " + name + " profile", rt.profile_err, tol));
      rep.checks.push_back(make_check("roundtrip " + name + " measure", rt.measure_err, tol));
    } catch (const ComputationError& e) {
      rep.checks.push_back(failed_check("roundtrip " + name, e));
    }
  }
}

void suite_scaling(const RunConfig& cfg, VerifyReport& rep) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const int K = order_for(cfg.n_peaks);
  const Rational c(10), d(2);
  const TimeValue tv = cfg.times.empty() ? TimeValue{} : cfg.times.front();
  ScalingResidual r;
  Real tol(0);
  if (exact_discrete(spec) && tv.coeff == 0) {
    r = scaling_check(exact_moments(spec, K), c, d);
  } else {
    const auto table = moments(spec, tv.value(), K, cfg.digits);
    WorkingPrecision wp(table.work_digits);
    r = scaling_check(table, c, d);
    tol = pow10_neg(cfg.digits / 2.0);
  }
  WorkingPrecision wp(cfg.digits + 20);
  rep.checks.push_back(make_check(label("scaling x", tv), r.x, tol));
  rep.checks.push_back(make_check(label("scaling omega", tv), r.omega, tol));
}

void suite_conservation(const RunConfig& cfg, VerifyReport& rep) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const auto times = times_or(cfg, literal_times({"-10", "-5", "0", "5", "10"}));
  const std::size_t N = spec.kind == MeasureKind::FiniteDiscrete ? spec.atoms.size() : std::max<std::size_t>(cfg.n_peaks, 350);
  WorkingPrecision wp(cfg.digits + 20);
  std::vector<Real> values;
  Real tail(0);
  try {
    for (const auto& tv : times) {
      const Momentum m = total_momentum(spec, tv.value(), N, cfg.digits);
      values.push_back(m.value);
      tail = max(tail, m.tail_bound);
    }
  } catch (const ComputationError& e) {
    rep.checks.push_back(failed_check("conservation", e));
    return;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  rep.checks.push_back(make_check("momentum drift N=" + std::to_string(N), *hi - *lo, Real("1e-6"), true,
                                  "sum " + to_decimal(values.front(), 12) + ", tail bound " + sci(tail)));
}

void suite_asympt(const RunConfig& cfg, VerifyReport& rep) {
  const SpectralMeasureSpec spec = measure_of(cfg);
  const auto rows = comparison(cfg, spec, nullptr);
  WorkingPrecision wp(cfg.digits + 20);
  for (const char* q : {"x", "omega"}) {
    std::vector<const ComparisonRow*> sel;
    for (const auto& r : rows) {
      if (r.quantity == q && r.n == 1) sel.push_back(&r);
    }
    if (sel.size() < 2) throw ValidationError("asympt suite needs at least two times");
    std::sort(sel.begin(), sel.end(), [](auto* a, auto* b) { return abs(a->t) < abs(b->t); });
    const Real first = sel.front()->abs_err, last = sel.back()->abs_err;
    const Real floor = pow10_neg(cfg.digits / 2.0);
    rep.checks.push_back(make_check(std::string("asympt n=1 ") + q + " error shrinks", last, first,
                                    last < first || last <= floor,
                                    "slope " + to_decimal(error_trend(rows, q, 1), 4)));
  }
}

}  // namespace

bool VerifyReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json VerifyReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks) {
    json e{{"name", c.name}, {"residual", sci(c.residual)}, {"tolerance", sci(c.tolerance)}, {"pass", c.pass}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    list.push_back(e);
  }
  return json{{"suite", suite}, {"pass", pass()}, {"checks", list}};
}

VerifyReport verify(const RunConfig& cfg) {
  VerifyReport rep;
  rep.suite = cfg.suite;
  if (cfg.suite == "identities") suite_identities(cfg, rep);
  else if (cfg.suite == "ode") suite_ode(cfg, rep);
  else if (cfg.suite == "roundtrip") suite_roundtrip(cfg, rep);
  else if (cfg.suite == "scaling") suite_scaling(cfg, rep);
  else if (cfg.suite == "conservation") suite_conservation(cfg, rep);
  else if (cfg.suite == "asympt") suite_asympt(cfg, rep);
  else throw ValidationError("unknown verify suite '" + cfg.suite + "'");
  return rep;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_config(cfg);
    WorkingPrecision wp(cfg.digits + 20);
    Sink sink(cfg, out);
    if (cfg.command == "snapshot") {
      cmd_snapshot(cfg, sink);
    } else if (cfg.command == "trajectory") {
      cmd_trajectory(cfg, sink);
    } else if (cfg.command == "collide") {
      cmd_collide(cfg, sink);
    } else if (cfg.command == "asympt") {
      cmd_asympt(cfg, sink);
    } else if (cfg.command == "roundtrip") {
      cmd_roundtrip(cfg, sink);
    } else {
      const VerifyReport rep = verify(cfg);
      sink.write("verify_" + cfg.suite + ".json", dump(rep.to_json()));
      if (!rep.pass()) {
        err << "peakon " << cfg.command << ": suite " << cfg.suite << " failed\n";
        return 2;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "peakon " << cfg.command << ": " << e.what() << "\n";
    return exit_code(e);
  }
}

}  // namespace peakon::cli
