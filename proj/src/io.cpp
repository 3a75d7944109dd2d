#include "peakon/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace peakon {

using nlohmann::json;

namespace {

std::string text_of(const json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return v.dump();
  throw ValidationError("field '" + field + "' must be a number or decimal string");
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string rational_text(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1 ? boost::multiprecision::numerator(q).str() : q.str();
}

}  // namespace

Rational rational_field(const json& v, const std::string& field) {
  try {
    return parse_rational(text_of(v, field));
  } catch (const ValidationError& e) {
    throw ValidationError("field '" + field + "': " + e.what());
  }
}

SpectralMeasureSpec measure_from_json(const json& j) {
  const std::string type = require(j, "type").is_string() ? j.at("type").get<std::string>() : "";
  auto field = [&](const char* key) { return rational_field(require(j, key), key); };
  SpectralMeasureSpec spec;
  if (type == "discrete") {
    const json& pts = require(j, "points");
    if (!pts.is_array() || pts.empty()) throw ValidationError("'points' must be a non-empty array");
    std::vector<std::pair<Rational, Rational>> points;
    for (const auto& p : pts) {
      points.emplace_back(rational_field(require(p, "lambda"), "lambda"), rational_field(require(p, "gamma"), "gamma"));
    }
    spec = finite_discrete(points);
  } else if (type == "laguerre") {
    spec = laguerre(field("gamma"), field("alpha"));
  } else if (type == "jacobi") {
    spec = jacobi(field("a"), field("b"), field("alpha"));
  } else if (type == "stieltjes_wigert") {
    spec = stieltjes_wigert(field("kappa"), field("alpha"));
  } else if (type == "al_salam_carlitz") {
    spec = al_salam_carlitz(field("a"), field("q"));
  } else {
    throw ValidationError("unknown measure type '" + type + "'");
  }
  validate(spec);
  return spec;
}

json measure_to_json(const SpectralMeasureSpec& spec) {
  json j;
  switch (spec.kind) {
    case MeasureKind::FiniteDiscrete: {
      j["type"] = "discrete";
      json pts = json::array();
      for (const auto& a : spec.atoms) {
        json p;
        p["lambda"] = a.lambda_q ? rational_text(*a.lambda_q) : to_decimal(a.lambda, static_cast<int>(current_digits()));
        p["gamma"] = a.gamma_q ? rational_text(*a.gamma_q) : to_decimal(a.gamma, static_cast<int>(current_digits()));
        pts.push_back(p);
      }
      j["points"] = pts;
      break;
    }
    case MeasureKind::Laguerre:
      j["type"] = "laguerre";
      j["gamma"] = rational_text(spec.p1);
      j["alpha"] = rational_text(spec.p2);
      break;
    case MeasureKind::Jacobi:
      j["type"] = "jacobi";
      j["a"] = rational_text(spec.p1);
      j["b"] = rational_text(spec.p2);
      j["alpha"] = rational_text(spec.p3);
      break;
    case MeasureKind::StieltjesWigert:
      j["type"] = "stieltjes_wigert";
      j["kappa"] = rational_text(spec.p1);
      j["alpha"] = rational_text(spec.p2);
      break;
    case MeasureKind::AlSalamCarlitz:
      j["type"] = "al_salam_carlitz";
      j["a"] = rational_text(spec.p1);
      j["q"] = rational_text(spec.p2);
      break;
  }
  return j;
}

json load_json(const std::string& path_or_inline) {
  std::string text;
  const auto first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_inline[first] == '{') {
    text = path_or_inline;
  } else {
    std::ifstream in(path_or_inline);
    if (!in) throw IoError("cannot open '" + path_or_inline + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

PeakonInput peakons_from_json(const json& j, unsigned digits) {
  const json& list = require(j, "peakons");
  if (!list.is_array() || list.empty()) throw ValidationError("'peakons' must be a non-empty array");
  PeakonInput in;
  WorkingPrecision wp(digits + 20);
  for (const auto& p : list) {
    if (p.contains("xt")) {
      in.xt.push_back(rational_field(p.at("xt"), "xt"));
    } else {
      const Real x = to_real(rational_field(require(p, "x"), "x"));
      in.xt.push_back(Rational(Real(exp(x))));
      in.exact = false;
    }
    in.omega.push_back(rational_field(require(p, "omega"), "omega"));
    in.upsilon.push_back(p.contains("upsilon") ? rational_field(p.at("upsilon"), "upsilon") : Rational(0));
  }
  for (std::size_t i = 0; i < in.xt.size(); ++i) {
    if (in.xt[i] <= 0) throw ValidationError("xt must be positive");
    if (i > 0 && in.xt[i] <= in.xt[i - 1]) throw ValidationError("positions must be strictly increasing");
    if (in.upsilon[i] < 0) throw ValidationError("upsilon must be non-negative");
  }
  return in;
}

void write_profile_header(std::ostream& out) { out << "t,n,x_n,omega_n,upsilon_n\n"; }

template <class T>
void write_profile_rows(std::ostream& out, const PeakonProfile<T>& p, int digits) {
  const std::string ts = to_decimal(p.t, digits);
  for (std::size_t n = 0; n < p.size(); ++n) {
    out << ts << ',' << (n + 1) << ',' << to_decimal(p.x[n], digits) << ',';
    out << (n < p.omega.size() ? to_decimal(p.omega[n], digits) : std::string()) << ',';
    if (n < p.upsilon.size()) {
      out << to_decimal(p.upsilon[n], digits);
    } else if (p.last_upsilon && n + 1 == p.size()) {
      out << to_decimal(*p.last_upsilon, digits);
    }
    out << '\n';
  }
}

void write_solution_csv(std::ostream& out, const std::vector<std::pair<Real, Real>>& samples, int digits) {
  out << "x,u\n";
  for (const auto& [x, u] : samples) out << to_decimal(x, digits) << ',' << to_decimal(u, digits) << '\n';
}

template <class T>
json profile_to_json(const PeakonProfile<T>& p, int digits) {
  json j;
  j["t"] = to_decimal(p.t, digits);
  j["finite"] = p.finite;
  j["bound"] = p.bound;
  j["s_minus1"] = to_decimal(p.s_minus1, digits);
  json list = json::array();
  for (std::size_t n = 0; n < p.size(); ++n) {
    json e;
    e["n"] = n + 1;
    e["x"] = to_decimal(p.x[n], digits);
    if (n < p.omega.size()) e["omega"] = to_decimal(p.omega[n], digits);
    if (n < p.upsilon.size()) {
      e["upsilon"] = to_decimal(p.upsilon[n], digits);
    } else if (p.last_upsilon && n + 1 == p.size()) {
      e["upsilon"] = to_decimal(*p.last_upsilon, digits);
    }
    list.push_back(e);
  }
  j["peakons"] = list;
  return j;
}

json collision_to_json(const CollisionReport& r, int digits) {
  json j;
  j["k"] = r.k;
  json roots = json::array();
  for (const auto& c : r.roots) {
    json e;
    e["t"] = to_decimal(c.t, digits);
    e["bracket"] = json::array({to_decimal(c.lo, digits), to_decimal(c.hi, digits)});
    e["upsilon_mass"] = to_decimal(c.upsilon_mass, digits);
    roots.push_back(e);
  }
  j["roots"] = roots;
  j["complete"] = r.complete;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

template <class T>
void write_grid_csv(std::ostream& out, const HankelGrid<T>& grid, int digits) {
  out << "l,k,value\n";
  for (int l = -2; l <= 3; ++l) {
    for (int k = 0; k <= grid.max_delta_k(l); ++k) {
      if (!grid.has_delta(l, k)) continue;
      out << l << ',' << k << ',' << to_decimal(grid.d(l, k), digits) << '\n';
    }
  }
}

template void write_profile_rows(std::ostream&, const PeakonProfile<Real>&, int);
template void write_profile_rows(std::ostream&, const PeakonProfile<Rational>&, int);
template json profile_to_json(const PeakonProfile<Real>&, int);
template json profile_to_json(const PeakonProfile<Rational>&, int);
template void write_grid_csv(std::ostream&, const HankelGrid<Real>&, int);
template void write_grid_csv(std::ostream&, const HankelGrid<Rational>&, int);

}  // namespace peakon
