#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "bounds.hpp"
#include "errors.hpp"
#include "matrix_io.hpp"
#include "oscillator.hpp"
#include "random.hpp"

namespace subpert {
namespace {

struct TrialDraw {
  std::uint64_t seed;
  int dim;
  double x;
};

// Dimension and x come from their own stream so that the instance seed is
// used only for the matrices.
TrialDraw draw_trial(const RunConfig& cfg, long index, double x_lo,
                     double x_hi) {
  TrialDraw t{};
  t.seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(index));
  SplitMix64 rng(splitmix64_mix(t.seed ^ 0xD1B54A32D192ED03ULL));
  t.dim = cfg.dim_min + static_cast<int>(rng.below(
                            static_cast<std::uint64_t>(cfg.dim_max - cfg.dim_min + 1)));
  t.x = rng.uniform(x_lo, x_hi);
  return t;
}

void fill_record(ResultRow& row, const AnalysisRecord& rec) {
  row.d = rec.d;
  row.vnorm = rec.vnorm;
  row.x = rec.x;
  row.theta = rec.theta;
  row.m_star = rec.bound_mstar;
  row.m_ms = rec.bound_ms;
  row.pass_mstar = flag_of(rec.pass_mstar);
  row.pass_ms = flag_of(rec.pass_ms);
  if (rec.bound_kmm) {
    row.m_kmm = *rec.bound_kmm;
    row.pass_kmm = flag_of(*rec.pass_kmm);
  }
}

void fill_sin2(ResultRow& row, const Sin2ThetaReport& s2) {
  if (s2.skipped) return;
  row.sin2_lhs = s2.apriori_lhs;
  row.sin2_rhs = s2.rhs;
  row.pass_sin2 = flag_of(s2.pass());
}

struct TrialOutput {
  ResultRow row;
  std::optional<PerturbationProblem> problem;  // kept for fixture dumps
  bool rank_changed = false;
};

TrialOutput verify_trial(const RunConfig& cfg, long index, bool with_kappa,
                         bool with_sin2, bool with_path, double x_lo,
                         double x_hi) {
  const TrialDraw draw = draw_trial(cfg, index, x_lo, x_hi);
  TrialOutput out;
  out.row.trial = index;
  out.row.seed = draw.seed;
  out.row.dim = draw.dim;
  out.problem.emplace(random_problem(draw.dim, draw.x, draw.seed));
  const PerturbationProblem& p = *out.problem;
  const AnalysisRecord rec = analyze(p);
  fill_record(out.row, rec);
  if (with_sin2) fill_sin2(out.row, sin2theta_check(p, rec));
  const bool below_cstar = rec.x < constants().c_star;
  bool consistent = rec.omega_localized;
  if (below_cstar) {
    consistent = consistent && rec.rank_perturbed == rec.rank_unperturbed;
  }
  out.row.pass_consistency = flag_of(consistent);
  out.rank_changed = rec.rank_perturbed != rec.rank_unperturbed;
  if (with_kappa) {
    const PathTrace trace = kappa_path(p);
    out.row.kappa_sum = trace.sum;
    out.row.kappa_steps = trace.segments();
    out.row.pass_kappa =
        flag_of(trace.pass() && trace.segments() == n_sharp(rec.x) + 1);
  }
  if (with_path) {
    const auto part = uniform_partition(0.0, 1.0, cfg.partition);
    const ProjectionPathReport pr = projection_path(p, part);
    out.row.path_length = pr.length;
    out.row.path_bound = pr.log_bound;
    out.row.pass_path = flag_of(pr.pass());
  }
  return out;
}

TrialOutput oscillator_trial(const RunConfig& cfg) {
  TrialOutput out;
  out.row.trial = 0;
  out.row.seed = cfg.seed;
  const OscillatorResult res =
      oscillator_experiment(cfg.osc_dims, cfg.osc_nmax, cfg.osc_vnorm,
                            cfg.seed, cfg.parity_preserving);
  out.row.dim = static_cast<int>(binomial(cfg.osc_dims + cfg.osc_nmax, cfg.osc_nmax));
  fill_record(out.row, res.record);
  const bool consistent =
      res.localization_exact && res.complement_equal &&
      (res.record.x >= constants().c_star || res.omega_count == res.even_dim);
  out.row.pass_consistency = flag_of(consistent);
  return out;
}

template <class Fn>
std::vector<TrialOutput> run_trials(long count, int threads, Fn fn) {
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(count));
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i; (i = next.fetch_add(1)) < count;) {
      const auto start = std::chrono::steady_clock::now();
      try {
        outputs[i] = fn(i);
      } catch (const std::exception& e) {
        outputs[i].row.trial = i;
        outputs[i].row.error = e.what();
      }
      outputs[i].row.wall_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - start)
              .count();
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return outputs;
}

RunResult collect(std::vector<TrialOutput> outputs, const RunConfig& cfg) {
  RunResult res;
  for (auto& o : outputs) {
    if (!cfg.timestamp) o.row.wall_ms = 0.0;
    if (!o.row.error.empty()) ++res.errors;
    if (o.row.violation()) {
      ++res.violations;
      if (!cfg.fixture_dir.empty() && o.problem) {
        const auto dir =
            cfg.fixture_dir / ("trial_" + std::to_string(o.row.trial));
        write_fixture(*o.problem, dir);
        res.fixtures.push_back(dir);
      }
    }
    res.rows.push_back(std::move(o.row));
  }
  std::sort(res.rows.begin(), res.rows.end(),
            [](const ResultRow& a, const ResultRow& b) { return a.trial < b.trial; });
  return res;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string flag_csv(Flag f) {
  switch (f) {
    case Flag::kPass:
      return "1";
    case Flag::kFail:
      return "0";
    case Flag::kNa:
      break;
  }
  return "";
}

std::string flag_json(Flag f) {
  switch (f) {
    case Flag::kPass:
      return "true";
    case Flag::kFail:
      return "false";
    case Flag::kNa:
      break;
  }
  return "null";
}

std::string json_string(const std::string& s) {
  std::ostringstream os;
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"':
        os << "\\\"";
        break;
      case '\\':
        os << "\\\\";
        break;
      case '\n':
        os << "\\n";
        break;
      case '\r':
        os << "\\r";
        break;
      case '\t':
        os << "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          os << "\\u" << std::hex << std::setw(4) << std::setfill('0')
             << static_cast<int>(c) << std::dec << std::setfill(' ');
        } else {
          os << c;
        }
    }
  }
  os << '"';
  return os.str();
}

// Cell values per column; `json` selects null/true/false spellings.
std::vector<std::string> cells(const ResultRow& r, bool json) {
  auto num = [&](double v) {
    const std::string s = format_double(v);
    return json && s.empty() ? std::string("null") : s;
  };
  auto flag = [&](Flag f) { return json ? flag_json(f) : flag_csv(f); };
  auto integer = [&](long v) {
    if (v < 0) return json ? std::string("null") : std::string();
    return std::to_string(v);
  };
  return {std::to_string(r.trial),
          std::to_string(r.seed),
          integer(r.dim),
          num(r.d),
          num(r.vnorm),
          num(r.x),
          num(r.theta),
          num(r.m_star),
          num(r.m_ms),
          num(r.m_kmm),
          num(r.sin2_lhs),
          num(r.sin2_rhs),
          num(r.path_length),
          num(r.path_bound),
          num(r.kappa_sum),
          integer(r.kappa_steps),
          flag(r.pass_mstar),
          flag(r.pass_ms),
          flag(r.pass_kmm),
          flag(r.pass_sin2),
          flag(r.pass_path),
          flag(r.pass_kappa),
          flag(r.pass_consistency),
          num(r.wall_ms),
          json ? json_string(r.error) : csv_field(r.error)};
}

}  // namespace

bool ResultRow::violation() const {
  for (Flag f : {pass_mstar, pass_ms, pass_kmm, pass_sin2, pass_path,
                 pass_kappa, pass_consistency}) {
    if (f == Flag::kFail) return true;
  }
  return false;
}

void validate(const RunConfig& cfg) {
  if (cfg.trials < 0) throw ValidationError("--trials must be >= 0");
  if (cfg.dim_min < 2 || cfg.dim_max < cfg.dim_min) {
    throw ValidationError("dimension range must satisfy 2 <= min <= max");
  }
  if (!(cfg.x_min > 0.0 && cfg.x_min < cfg.x_max && cfg.x_max < 0.5)) {
    throw ValidationError("x range must satisfy 0 < min < max < 1/2");
  }
  if (cfg.grid < 1) throw ValidationError("--grid must be >= 1");
  if (cfg.partition < 2) throw ValidationError("--partition must be >= 2");
  if (cfg.threads < 1) throw ValidationError("--threads must be >= 1");
  if (cfg.subcommand == Subcommand::kOscillator) {
    if (cfg.osc_dims < 1 || cfg.osc_nmax < 1) {
      throw ValidationError("oscillator needs --dims >= 1 and --nmax >= 1");
    }
    if (!(cfg.osc_vnorm >= 0.0 && cfg.osc_vnorm < 0.5)) {
      throw ValidationError("oscillator needs 0 <= --vnorm < 1/2");
    }
  }
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {
      "trial",      "seed",        "dim",         "d",
      "vnorm",      "x",           "theta",       "m_star",
      "m_ms",       "m_kmm",       "sin2_lhs",    "sin2_rhs",
      "path_length", "path_bound", "kappa_sum",   "kappa_steps",
      "pass_mstar", "pass_ms",     "pass_kmm",    "pass_sin2",
      "pass_path",  "pass_kappa",  "pass_consistency", "wall_ms",
      "error"};
  return cols;
}

std::vector<ResultRow> bounds_grid(int grid) {
  if (grid < 1) throw ValidationError("grid must be >= 1");
  const double c_kmm = constants().c_kmm;
  std::vector<ResultRow> rows;
  rows.reserve(grid);
  for (int k = 0; k < grid; ++k) {
    ResultRow r;
    r.trial = k;
    r.x = 0.5 * static_cast<double>(k) / grid;
    r.m_star = m_star(r.x);
    r.m_ms = m_ms(r.x);
    if (r.x <= c_kmm) r.m_kmm = m_kmm(r.x);
    rows.push_back(r);
  }
  return rows;
}

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  const long trials = cfg.trials;
  switch (cfg.subcommand) {
    case Subcommand::kConstants:
      return {};
    case Subcommand::kBounds: {
      RunResult res;
      res.rows = bounds_grid(cfg.grid);
      return res;
    }
    case Subcommand::kVerify:
      return collect(run_trials(trials, cfg.threads,
                                [&](long i) {
                                  return verify_trial(cfg, i, true, true, true,
                                                      cfg.x_min, cfg.x_max);
                                }),
                     cfg);
    case Subcommand::kPath:
      return collect(run_trials(trials, cfg.threads,
                                [&](long i) {
                                  return verify_trial(cfg, i, false, false,
                                                      true, cfg.x_min,
                                                      cfg.x_max);
                                }),
                     cfg);
    case Subcommand::kOscillator:
      return collect(run_trials(1, 1, [&](long) { return oscillator_trial(cfg); }),
                     cfg);
    case Subcommand::kStress: {
      const double lo = constants().c_star;
      auto outputs = run_trials(trials, cfg.threads, [&](long i) {
        TrialOutput o = verify_trial(cfg, i, false, true, false, lo, 0.5);
        // Rank preservation is not guaranteed past c_star.
        o.row.pass_consistency = Flag::kNa;
        return o;
      });
      StressSummary s;
      double total = 0.0;
      for (const auto& o : outputs) {
        const ResultRow& r = o.row;
        if (!r.error.empty()) continue;
        ++s.count;
        total += r.theta;
        s.theta_min = s.count == 1 ? r.theta : std::min(s.theta_min, r.theta);
        s.theta_max = s.count == 1 ? r.theta : std::max(s.theta_max, r.theta);
        if (r.theta >= kPi / 2 - 1e-12) ++s.right_angle_events;
        if (o.rank_changed) ++s.rank_changes;
      }
      if (s.count > 0) s.theta_mean = total / s.count;
      RunResult res = collect(std::move(outputs), cfg);
      res.stress = s;
      return res;
    }
  }
  throw InternalError("unknown subcommand");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               bool timestamp) {
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    out << "# generated " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "\r\n";
  }
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << "\r\n";
  for (const auto& r : rows) {
    const auto c = cells(r, false);
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
    out << "\r\n";
  }
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = result_columns();
  out << "[";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto c = cells(rows[k], true);
    out << (k ? ",\n " : "\n ") << "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
      out << (i ? ", " : "") << '"' << cols[i] << "\": " << c[i];
    }
    out << "}";
  }
  out << (rows.empty() ? "]\n" : "\n]\n");
}

void write_fixture(const PerturbationProblem& p,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_matrix(dir / "A.txt", p.a().matrix());
  write_matrix(dir / "V.txt", p.v().matrix());
  std::ofstream s(dir / "sigma.txt");
  if (!s) throw IoError("cannot write " + (dir / "sigma.txt").string());
  s << std::setprecision(17);
  for (const auto& iv : p.sigma().intervals()) s << iv.lo << ' ' << iv.hi << '\n';
}

}  // namespace subpert
