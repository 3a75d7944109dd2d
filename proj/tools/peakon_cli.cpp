// peakon: infinite peakon profiles from spectral measures.
//
//   peakon snapshot   --measure m.json --t-grid 0,1 --n-peaks 5 --grid -5:5:0.1 --out run
//   peakon trajectory --measure m.json --t-grid -10:10:1 --n-peaks 4
//   peakon verify     --suite identities --measure m.json
//   peakon collide    --profile p.json --window 0:10
//   peakon asympt     --measure '{"type":"laguerre","gamma":"0","alpha":"1/2"}'
//   peakon roundtrip  --profile p.json

#include <CLI11.hpp>

#include <iostream>

#include "peakon/cli.hpp"

int main(int argc, char** argv) {
  using namespace peakon;
  CLI::App app{"Peakon profiles from spectral measures"};
  app.require_subcommand(1);

  cli::RunConfig cfg;
  std::optional<unsigned> digits;
  std::string t_single, t_grid, grid;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--measure", cfg.measure, "measure JSON file or inline JSON");
    sub->add_option("--profile", cfg.profile, "peakon profile JSON file or inline JSON");
    sub->add_option("--t", t_single, "single time (decimal, or c*log(r))");
    sub->add_option("--t-grid", t_grid, "times a,b,c or a:b:step");
    sub->add_option("--n-peaks", cfg.n_peaks, "number of peakons");
    sub->add_option("--digits", digits, "decimal digits (default 200 or PEAKON_DIGITS)");
    sub->add_option("--grid", grid, "u sampling grid a:b:step");
    sub->add_option("--out", cfg.out_dir, "output directory (stdout when omitted)");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--preset", cfg.preset, "paper-300-terms");
    sub->add_flag("--gnuplot", cfg.gnuplot, "also write a gnuplot script");
  };

  auto* snapshot = app.add_subcommand("snapshot", "peakon positions, heights and u at fixed times");
  common(snapshot);
  snapshot->add_flag("--dump-grid", cfg.dump_grid, "write the Hankel grid l,k,value");
  common(app.add_subcommand("trajectory", "peakon table over a time grid"));
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify);
  verify->add_option("--suite", cfg.suite, "identities|ode|roundtrip|scaling|conservation|asympt")->required();
  verify->add_option("--seed", cfg.seed, "seed for random profiles");
  verify->add_option("--cases", cfg.cases, "number of random profiles");
  auto* collide = app.add_subcommand("collide", "zeros of Delta_{1,k}(t)");
  common(collide);
  collide->add_option("--k", cfg.k, "determinant order");
  collide->add_option("--window", cfg.window, "scan interval a:b");
  common(app.add_subcommand("asympt", "computed against predicted asymptotics"));
  common(app.add_subcommand("roundtrip", "forward and inverse maps"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    cfg.digits = cli::resolve_digits(digits);
    if (!t_single.empty() && !t_grid.empty()) throw ValidationError("use --t or --t-grid, not both");
    if (!t_single.empty()) cfg.times = {cli::TimeValue::parse(t_single)};
    if (!t_grid.empty()) cfg.times = cli::parse_times(t_grid);
    if (!grid.empty()) cfg.grid = grid;
  } catch (const std::exception& e) {
    std::cerr << "peakon: " << e.what() << "\n";
    return cli::exit_code(e);
  }
  return cli::run(cfg, std::cout, std::cerr);
}
