// Command-line driver. Talks to the library only through the C interface.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "subpert/subpert.h"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

const double kPi = std::acos(-1.0);

struct Options {
  subpert_config_t cfg{};
  std::string format = "csv";
  std::string output;
  std::string output_dir;
  bool no_timestamp = false;
};

std::filesystem::path resolve_output_dir(const Options& o) {
  if (!o.output_dir.empty()) return o.output_dir;
  if (const char* env = std::getenv("SUBPERT_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void print_constants(const Options& o, std::FILE* out) {
  subpert_constants_t c;
  subpert_constants(&c);
  double k2 = 0.0;
  subpert_kappa(2, &k2);
  const struct {
    const char* name;
    double value;
  } rows[] = {{"c_star", c.c_star},
              {"c_ms", c.c_ms},
              {"c_kmm", c.c_kmm},
              {"c_pi4", c.c_pi4},
              {"four_over_pi2_plus_4", 4.0 / (kPi * kPi + 4.0)},
              {"kappa_2", k2},
              {"C0", c.c0},
              {"q", c.q}};
  if (o.format == "json") {
    std::fputs("[", out);
    bool first = true;
    for (const auto& r : rows) {
      std::fprintf(out, "%s\n {\"name\": \"%s\", \"value\": %.17g}", first ? "" : ",",
                   r.name, r.value);
      first = false;
    }
    std::fputs("\n]\n", out);
  } else {
    std::fputs("name,value\r\n", out);
    for (const auto& r : rows) std::fprintf(out, "%s,%.17g\r\n", r.name, r.value);
  }
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.cfg.seed, "master seed");
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output", o.output, "output file (default: stdout)");
  sub->add_option("--output-dir", o.output_dir,
                  "directory for relative outputs and fixtures "
                  "(default: $SUBPERT_OUTPUT_DIR or .)");
  sub->add_flag("--no-timestamp", o.no_timestamp,
                "omit the CSV timestamp line and zero the wall-time column");
}

void add_ensemble(CLI::App* sub, Options& o) {
  sub->add_option("--trials", o.cfg.trials, "number of trials")->check(CLI::NonNegativeNumber);
  sub->add_option("--dim-min", o.cfg.dim_min, "smallest dimension");
  sub->add_option("--dim-max", o.cfg.dim_max, "largest dimension");
  sub->add_option("--threads", o.cfg.threads, "worker threads")->check(CLI::PositiveNumber);
}

int run(const Options& o, std::FILE* err) {
  if (subpert_config_validate(&o.cfg) != SUBPERT_OK) {
    std::fprintf(err, "error: %s\n", subpert_last_error());
    return kExitUsage;
  }
  const auto dir = resolve_output_dir(o);
  std::string out_path = "-";
  if (!o.output.empty() && o.output != "-") {
    std::filesystem::path p(o.output);
    if (p.is_relative()) p = dir / p;
    out_path = p.string();
  }

  if (o.cfg.subcommand == SUBPERT_CMD_CONSTANTS) {
    std::FILE* f = out_path == "-" ? stdout : std::fopen(out_path.c_str(), "wb");
    if (f == nullptr) {
      std::fprintf(err, "error: cannot open %s\n", out_path.c_str());
      return kExitError;
    }
    print_constants(o, f);
    if (f != stdout) std::fclose(f);
    return 0;
  }

  subpert_config_t cfg = o.cfg;
  const std::string fixtures = (dir / "fixtures").string();
  cfg.fixture_dir = fixtures.c_str();
  cfg.timestamp = o.no_timestamp ? 0 : 1;

  subpert_results* res = nullptr;
  if (subpert_run(&cfg, &res) != SUBPERT_OK) {
    std::fprintf(err, "error: %s\n", subpert_last_error());
    return kExitError;
  }
  const subpert_format fmt = o.format == "json" ? SUBPERT_FORMAT_JSON : SUBPERT_FORMAT_CSV;
  int status = 0;
  if (subpert_results_write(res, out_path.c_str(), fmt, o.no_timestamp ? 0 : 1) != SUBPERT_OK) {
    std::fprintf(err, "error: %s\n", subpert_last_error());
    status = kExitError;
  }
  subpert_stress_t s;
  if (subpert_results_stress(res, &s) == SUBPERT_OK) {
    std::fprintf(err,
                 "stress: %ld trials, theta min %.6f mean %.6f max %.6f, "
                 "right-angle events %ld, rank changes %ld\n",
                 s.count, s.theta_min, s.theta_mean, s.theta_max,
                 s.right_angle_events, s.rank_changes);
  }
  const long violations = subpert_results_violations(res);
  const long errors = subpert_results_errors(res);
  for (size_t i = 0; i < subpert_results_fixture_count(res); ++i) {
    std::fprintf(err, "violation fixture: %s\n", subpert_results_fixture(res, i));
  }
  if (errors > 0) {
    std::fprintf(err, "%ld trial(s) raised errors\n", errors);
  }
  subpert_results_destroy(res);
  if (violations > 0) {
    std::fprintf(err, "%ld certified-bound violation(s)\n", violations);
    return kExitViolation;
  }
  if (errors > 0 && status == 0) status = kExitError;
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  subpert_config_init(&o.cfg);

  CLI::App app{"Subspace perturbation bounds: constants, tabulation and seeded verification"};
  app.require_subcommand(1);

  auto* constants = app.add_subcommand("constants", "print the bound constants");
  add_common(constants, o);

  auto* bounds = app.add_subcommand("bounds", "tabulate m_star, m_ms, m_kmm on a grid");
  add_common(bounds, o);
  bounds->add_option("--grid", o.cfg.grid, "grid points on [0, 1/2)")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "random ensemble against all certified bounds");
  add_common(verify, o);
  add_ensemble(verify, o);
  verify->add_option("--x-min", o.cfg.x_min, "smallest ||V||/d");
  verify->add_option("--x-max", o.cfg.x_max, "largest ||V||/d (< 1/2)");
  verify->add_option("--partition", o.cfg.partition, "projection-path points");

  auto* path = app.add_subcommand("path", "projection-path length against its log bound");
  add_common(path, o);
  add_ensemble(path, o);
  path->add_option("--x-min", o.cfg.x_min, "smallest ||V||/d");
  path->add_option("--x-max", o.cfg.x_max, "largest ||V||/d (< 1/2)");
  path->add_option("--partition", o.cfg.partition, "projection-path points");

  auto* osc = app.add_subcommand("oscillator", "truncated harmonic oscillator experiment");
  add_common(osc, o);
  osc->add_option("--dims", o.cfg.osc_dims, "number of oscillator modes");
  osc->add_option("--nmax", o.cfg.osc_nmax, "highest level kept");
  osc->add_option("--vnorm", o.cfg.osc_vnorm, "perturbation norm (< 1/2)");
  osc->add_flag("--parity-preserving", o.cfg.parity_preserving,
                "zero the parity-mixing blocks of V");

  auto* stress = app.add_subcommand("stress", "sample x in [c_star, 1/2) and report theta");
  add_common(stress, o);
  add_ensemble(stress, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::pair<CLI::App*, subpert_subcommand> table[] = {
      {constants, SUBPERT_CMD_CONSTANTS}, {bounds, SUBPERT_CMD_BOUNDS},
      {verify, SUBPERT_CMD_VERIFY},       {path, SUBPERT_CMD_PATH},
      {osc, SUBPERT_CMD_OSCILLATOR},      {stress, SUBPERT_CMD_STRESS}};
  for (const auto& [sub, cmd] : table) {
    if (sub->parsed()) o.cfg.subcommand = cmd;
  }
  return run(o, stderr);
}
