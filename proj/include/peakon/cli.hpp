#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peakon/asympt.hpp"
#include "peakon/io.hpp"

namespace peakon::cli {

// A time value: coeff, or coeff * log(log_arg). Kept symbolic so that
// "6*log(4)" reaches the working precision intact.
struct TimeValue {
  Rational coeff{0};
  std::optional<Rational> log_arg;

  static TimeValue parse(const std::string& text);
  Real value() const;  // at the current working precision
};

// "a,b,c" or "a:b:step".
std::vector<TimeValue> parse_times(const std::string& text);

struct RunConfig {
  std::string command;
  std::string measure;  // path or inline JSON
  std::string profile;  // peakon-profile JSON (collide, roundtrip, verify)
  std::vector<TimeValue> times;
  std::size_t n_peaks = 5;
  std::optional<std::string> grid;  // "a:b:step"
  unsigned digits = 200;
  std::string preset;
  std::string out_dir;  // empty writes the main result to stdout
  std::string format = "csv";
  std::string suite;
  int k = 1;
  std::string window = "-10:10";  // collide scan interval
  std::uint64_t seed = 1;
  std::size_t cases = 20;         // random cases for verify roundtrip
  bool gnuplot = false;
  bool dump_grid = false;
};

// Flag, then PEAKON_DIGITS, then 200.
unsigned resolve_digits(std::optional<unsigned> flag);

// Throws ValidationError.
void check_config(const RunConfig& cfg);

int exit_code(const std::exception& e);

// Runs one command and returns the exit code. Errors are reported on err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Per-check verification result.
struct Check {
  std::string name;
  Real residual{0};
  Real tolerance{0};
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const;
  nlohmann::json to_json() const;
};

VerifyReport verify(const RunConfig& cfg);

}  // namespace peakon::cli
