#pragma once

// Reproducible experiment driver behind the command-line tool: seeded
// ensembles, the shared result-row schema and its CSV / JSON serializers,
// and fixture dumps for failing trials.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "perturbation.hpp"

namespace subpert {

enum class Subcommand { kConstants, kBounds, kVerify, kPath, kOscillator, kStress };
enum class Format { kCsv, kJson };

struct RunConfig {
  Subcommand subcommand = Subcommand::kVerify;
  std::uint64_t seed = 1;
  int trials = 100;
  int dim_min = 2;
  int dim_max = 50;
  double x_min = 0.01;
  double x_max = 0.49;
  int grid = 100;       // bounds
  int partition = 64;   // projection-path points (verify, path)
  int osc_dims = 1;
  int osc_nmax = 20;
  double osc_vnorm = 0.3;
  bool parity_preserving = false;
  Format format = Format::kCsv;
  bool timestamp = true;  // CSV header comment and wall-time column
  int threads = 1;
  std::filesystem::path fixture_dir;  // empty: no fixture dumps
};

/// Throws ValidationError for empty ranges, x_max >= 1/2 and the like.
void validate(const RunConfig& cfg);

enum class Flag : std::int8_t { kNa = -1, kFail = 0, kPass = 1 };

inline Flag flag_of(bool ok) { return ok ? Flag::kPass : Flag::kFail; }

/// One row per trial; fields that do not apply stay NaN / kNa / -1.
struct ResultRow {
  long trial = 0;
  std::uint64_t seed = 0;
  int dim = -1;
  double d = NAN;
  double vnorm = NAN;
  double x = NAN;
  double theta = NAN;
  double m_star = NAN;
  double m_ms = NAN;
  double m_kmm = NAN;
  double sin2_lhs = NAN;
  double sin2_rhs = NAN;
  double path_length = NAN;
  double path_bound = NAN;
  double kappa_sum = NAN;
  int kappa_steps = -1;
  Flag pass_mstar = Flag::kNa;
  Flag pass_ms = Flag::kNa;
  Flag pass_kmm = Flag::kNa;
  Flag pass_sin2 = Flag::kNa;
  Flag pass_path = Flag::kNa;
  Flag pass_kappa = Flag::kNa;
  Flag pass_consistency = Flag::kNa;
  double wall_ms = NAN;
  std::string error;

  bool violation() const;
};

struct StressSummary {
  long count = 0;
  double theta_min = NAN;
  double theta_mean = NAN;
  double theta_max = NAN;
  long right_angle_events = 0;  // theta = pi/2 within clamp
  long rank_changes = 0;
};

struct RunResult {
  std::vector<ResultRow> rows;  // sorted by trial
  long violations = 0;
  long errors = 0;
  std::vector<std::filesystem::path> fixtures;
  std::optional<StressSummary> stress;
};

/// Column names, in serialization order.
const std::vector<std::string>& result_columns();

std::vector<ResultRow> bounds_grid(int grid);

/// Dispatches on cfg.subcommand (kConstants yields no rows).
RunResult run(const RunConfig& cfg);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               bool timestamp);
void write_json(std::ostream& out, const std::vector<ResultRow>& rows);

/// Writes A.txt, V.txt (matrix fixture format) and sigma.txt ("lo hi" per
/// line) into dir.
void write_fixture(const PerturbationProblem& p,
                   const std::filesystem::path& dir);

}  // namespace subpert
