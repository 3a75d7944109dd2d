#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "peakon/flow.hpp"

namespace peakon {

// Measure-spec JSON. Numbers may be decimal strings ("0.05", "1/20") or JSON
// numbers; both are read exactly from their text.
SpectralMeasureSpec measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const SpectralMeasureSpec& spec);

// Inline JSON when the text starts with '{', a file path otherwise.
nlohmann::json load_json(const std::string& path_or_inline);

// Peakon-profile JSON {"peakons":[{"x":..,"omega":..,"upsilon":..}]}. An
// "xt" field (e^x) may replace "x" to keep positions exact.
struct PeakonInput {
  std::vector<Rational> xt;
  std::vector<Rational> omega;
  std::vector<Rational> upsilon;
  bool exact = true;  // every xt was given directly
};

PeakonInput peakons_from_json(const nlohmann::json& j, unsigned digits);

// Exact decimal or fraction to Rational; ValidationError naming `field`.
Rational rational_field(const nlohmann::json& v, const std::string& field);

// Columns t,n,x_n,omega_n,upsilon_n.
void write_profile_header(std::ostream& out);
template <class T>
void write_profile_rows(std::ostream& out, const PeakonProfile<T>& p, int digits);

// Columns x,u.
void write_solution_csv(std::ostream& out, const std::vector<std::pair<Real, Real>>& samples, int digits);

template <class T>
nlohmann::json profile_to_json(const PeakonProfile<T>& p, int digits);

// {k, roots:[{t, bracket, upsilon_mass}]}
nlohmann::json collision_to_json(const CollisionReport& r, int digits);

// Delta_{l,k} debug dump: l,k,value.
template <class T>
void write_grid_csv(std::ostream& out, const HankelGrid<T>& grid, int digits);

}  // namespace peakon
