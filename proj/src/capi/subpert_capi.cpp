#include "subpert/subpert.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "linalg.hpp"
#include "matrix_io.hpp"
#include "oscillator.hpp"
#include "perturbation.hpp"
#include "random.hpp"

struct subpert_matrix {
  subpert::Matrix m;
};

struct subpert_results {
  subpert::RunResult result;
  std::vector<std::string> fixture_paths;
};

namespace {

thread_local std::string g_last_error;

subpert_status fail(subpert_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, translating exceptions to status codes.
template <class Fn>
subpert_status guarded(Fn&& fn) {
  try {
    fn();
    return SUBPERT_OK;
  } catch (const subpert::Error& e) {
    return fail(static_cast<subpert_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SUBPERT_E_SIZE, "out of memory");
  } catch (const std::exception& e) {
    return fail(SUBPERT_E_INTERNAL, e.what());
  }
}

#define SUBPERT_REQUIRE(ptr)                                           \
  do {                                                                 \
    if ((ptr) == nullptr) return fail(SUBPERT_E_ARGUMENT, #ptr " is null"); \
  } while (0)

int tri(const std::optional<bool>& b) { return b ? (*b ? 1 : 0) : -1; }

void fill_analysis(const subpert::AnalysisRecord& r, subpert_analysis_t* out) {
  out->d = r.d;
  out->vnorm = r.vnorm;
  out->x = r.x;
  out->theta = r.theta;
  out->bound_mstar = r.bound_mstar;
  out->bound_ms = r.bound_ms;
  out->bound_kmm = r.bound_kmm.value_or(NAN);
  out->pass_mstar = r.pass_mstar ? 1 : 0;
  out->pass_ms = r.pass_ms ? 1 : 0;
  out->pass_kmm = tri(r.pass_kmm);
  out->sin2theta_lhs = r.sin2theta_lhs;
  out->sin2theta_rhs = r.sin2theta_rhs;
  out->rank_unperturbed = r.rank_unperturbed;
  out->rank_perturbed = r.rank_perturbed;
  out->acute = r.acute ? 1 : 0;
  out->omega_localized = r.omega_localized ? 1 : 0;
}

subpert_status to_config(const subpert_config_t* c, subpert::RunConfig& cfg) {
  if (c->subcommand < SUBPERT_CMD_CONSTANTS || c->subcommand > SUBPERT_CMD_STRESS) {
    return fail(SUBPERT_E_ARGUMENT, "unknown subcommand");
  }
  cfg.subcommand = static_cast<subpert::Subcommand>(c->subcommand);
  cfg.seed = c->seed;
  cfg.trials = c->trials;
  cfg.dim_min = c->dim_min;
  cfg.dim_max = c->dim_max;
  cfg.x_min = c->x_min;
  cfg.x_max = c->x_max;
  cfg.grid = c->grid;
  cfg.partition = c->partition;
  cfg.osc_dims = c->osc_dims;
  cfg.osc_nmax = c->osc_nmax;
  cfg.osc_vnorm = c->osc_vnorm;
  cfg.parity_preserving = c->parity_preserving != 0;
  cfg.timestamp = c->timestamp != 0;
  cfg.threads = c->threads;
  if (c->fixture_dir != nullptr) cfg.fixture_dir = c->fixture_dir;
  return SUBPERT_OK;
}

}  // namespace

extern "C" {

const char* subpert_status_string(subpert_status status) {
  switch (status) {
    case SUBPERT_OK:
      return "ok";
    case SUBPERT_E_DOMAIN:
      return "domain error";
    case SUBPERT_E_VALIDATION:
      return "validation error";
    case SUBPERT_E_NUMERIC:
      return "numeric error";
    case SUBPERT_E_AMBIGUITY:
      return "ambiguity error";
    case SUBPERT_E_DIMENSION:
      return "dimension error";
    case SUBPERT_E_SIZE:
      return "size error";
    case SUBPERT_E_IO:
      return "i/o error";
    case SUBPERT_E_INTERNAL:
      return "internal error";
    case SUBPERT_E_ARGUMENT:
      return "invalid argument";
  }
  return "unknown status";
}

const char* subpert_last_error(void) { return g_last_error.c_str(); }

const char* subpert_version(void) { return "1.0.0"; }

subpert_status subpert_matrix_create(int rows, int cols, const double* data,
                                     subpert_matrix** out) {
  SUBPERT_REQUIRE(out);
  if (rows < 0 || cols < 0) return fail(SUBPERT_E_DIMENSION, "negative shape");
  return guarded([&] {
    auto h = std::make_unique<subpert_matrix>();
    h->m = subpert::Matrix::Zero(rows, cols);
    if (data != nullptr) {
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) h->m(i, j) = data[static_cast<size_t>(i) * cols + j];
    }
    *out = h.release();
  });
}

subpert_status subpert_matrix_random_symmetric(int dim, uint64_t seed,
                                               subpert_matrix** out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] {
    auto h = std::make_unique<subpert_matrix>();
    h->m = subpert::random_symmetric(dim, seed).matrix();
    *out = h.release();
  });
}

subpert_status subpert_matrix_read(const char* path, subpert_matrix** out) {
  SUBPERT_REQUIRE(path);
  SUBPERT_REQUIRE(out);
  return guarded([&] {
    auto h = std::make_unique<subpert_matrix>();
    h->m = subpert::read_matrix(std::filesystem::path(path));
    *out = h.release();
  });
}

subpert_status subpert_matrix_write(const subpert_matrix* m, const char* path) {
  SUBPERT_REQUIRE(m);
  SUBPERT_REQUIRE(path);
  return guarded([&] { subpert::write_matrix(std::filesystem::path(path), m->m); });
}

subpert_status subpert_matrix_shape(const subpert_matrix* m, int* rows,
                                    int* cols) {
  SUBPERT_REQUIRE(m);
  if (rows) *rows = static_cast<int>(m->m.rows());
  if (cols) *cols = static_cast<int>(m->m.cols());
  return SUBPERT_OK;
}

subpert_status subpert_matrix_get(const subpert_matrix* m, int i, int j,
                                  double* value) {
  SUBPERT_REQUIRE(m);
  SUBPERT_REQUIRE(value);
  if (i < 0 || j < 0 || i >= m->m.rows() || j >= m->m.cols()) {
    return fail(SUBPERT_E_DIMENSION, "index out of range");
  }
  *value = m->m(i, j);
  return SUBPERT_OK;
}

subpert_status subpert_matrix_copy(const subpert_matrix* m, double* buf,
                                   size_t len) {
  SUBPERT_REQUIRE(m);
  SUBPERT_REQUIRE(buf);
  const auto rows = m->m.rows(), cols = m->m.cols();
  if (len < static_cast<size_t>(rows * cols)) {
    return fail(SUBPERT_E_SIZE, "buffer too small");
  }
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) buf[i * cols + j] = m->m(i, j);
  return SUBPERT_OK;
}

subpert_status subpert_matrix_norm(const subpert_matrix* m, double* value) {
  SUBPERT_REQUIRE(m);
  SUBPERT_REQUIRE(value);
  return guarded([&] { *value = subpert::operator_norm(m->m); });
}

void subpert_matrix_destroy(subpert_matrix* m) { delete m; }

subpert_status subpert_constants(subpert_constants_t* out) {
  SUBPERT_REQUIRE(out);
  const auto c = subpert::constants();
  *out = {c.c_star, c.c_ms, c.c_kmm, c.c_pi4, c.C0, c.q};
  return SUBPERT_OK;
}

subpert_status subpert_kappa(int n, double* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] { *out = subpert::kappa(n); });
}

subpert_status subpert_n_sharp(double x, int* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] { *out = subpert::n_sharp(x); });
}

subpert_status subpert_m_star(double x, double* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] { *out = subpert::m_star(x); });
}

subpert_status subpert_m_ms(double x, double* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] { *out = subpert::m_ms(x); });
}

subpert_status subpert_m_kmm(double x, double* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] { *out = subpert::m_kmm(x); });
}

subpert_status subpert_general_f(const double* mu, size_t len, double x,
                                 double* out) {
  SUBPERT_REQUIRE(mu);
  SUBPERT_REQUIRE(out);
  return guarded([&] { *out = subpert::general_f(std::span<const double>(mu, len), x); });
}

subpert_status subpert_analyze(const subpert_matrix* a, const subpert_matrix* v,
                               const double* sigma, size_t n_intervals,
                               subpert_analysis_t* out) {
  SUBPERT_REQUIRE(a);
  SUBPERT_REQUIRE(v);
  SUBPERT_REQUIRE(out);
  if (n_intervals > 0 && sigma == nullptr) return fail(SUBPERT_E_ARGUMENT, "sigma is null");
  return guarded([&] {
    std::vector<subpert::Interval> iv;
    for (size_t k = 0; k < n_intervals; ++k) iv.push_back({sigma[2 * k], sigma[2 * k + 1]});
    const subpert::PerturbationProblem p(subpert::SymmetricMatrix(a->m),
                                         subpert::SpectralSet::from_intervals(iv),
                                         subpert::SymmetricMatrix(v->m));
    fill_analysis(subpert::analyze(p), out);
  });
}

subpert_status subpert_analyze_random(int dim, double x, uint64_t seed,
                                      subpert_analysis_t* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] { fill_analysis(subpert::analyze(subpert::random_problem(dim, x, seed)), out); });
}

subpert_status subpert_oscillator(int dims, int n_max, double vnorm,
                                  uint64_t seed, int parity_preserving,
                                  subpert_oscillator_t* out) {
  SUBPERT_REQUIRE(out);
  return guarded([&] {
    const auto r = subpert::oscillator_experiment(dims, n_max, vnorm, seed,
                                                  parity_preserving != 0);
    fill_analysis(r.record, &out->analysis);
    out->complement_theta = r.complement_theta;
    out->complement_equal = r.complement_equal ? 1 : 0;
    out->localization_exact = r.localization_exact ? 1 : 0;
    out->omega_count = r.omega_count;
    out->even_dim = r.even_dim;
    out->total_dim = static_cast<int>(subpert::binomial(dims + n_max, n_max));
  });
}

void subpert_config_init(subpert_config_t* cfg) {
  if (cfg == nullptr) return;
  const subpert::RunConfig d;
  cfg->subcommand = static_cast<subpert_subcommand>(d.subcommand);
  cfg->seed = d.seed;
  cfg->trials = d.trials;
  cfg->dim_min = d.dim_min;
  cfg->dim_max = d.dim_max;
  cfg->x_min = d.x_min;
  cfg->x_max = d.x_max;
  cfg->grid = d.grid;
  cfg->partition = d.partition;
  cfg->osc_dims = d.osc_dims;
  cfg->osc_nmax = d.osc_nmax;
  cfg->osc_vnorm = d.osc_vnorm;
  cfg->parity_preserving = d.parity_preserving ? 1 : 0;
  cfg->timestamp = d.timestamp ? 1 : 0;
  cfg->threads = d.threads;
  cfg->fixture_dir = nullptr;
}

subpert_status subpert_config_validate(const subpert_config_t* c) {
  SUBPERT_REQUIRE(c);
  subpert::RunConfig cfg;
  if (auto s = to_config(c, cfg); s != SUBPERT_OK) return s;
  return guarded([&] { subpert::validate(cfg); });
}

subpert_status subpert_run(const subpert_config_t* c, subpert_results** out) {
  SUBPERT_REQUIRE(c);
  SUBPERT_REQUIRE(out);
  subpert::RunConfig cfg;
  if (auto s = to_config(c, cfg); s != SUBPERT_OK) return s;
  return guarded([&] {
    auto h = std::make_unique<subpert_results>();
    h->result = subpert::run(cfg);
    for (const auto& f : h->result.fixtures) h->fixture_paths.push_back(f.string());
    *out = h.release();
  });
}

size_t subpert_results_count(const subpert_results* r) {
  return r == nullptr ? 0 : r->result.rows.size();
}

subpert_status subpert_results_row(const subpert_results* r, size_t index,
                                   subpert_row_t* out) {
  SUBPERT_REQUIRE(r);
  SUBPERT_REQUIRE(out);
  if (index >= r->result.rows.size()) return fail(SUBPERT_E_DIMENSION, "row index out of range");
  const auto& w = r->result.rows[index];
  auto f = [](subpert::Flag x) { return static_cast<int>(x); };
  *out = {w.trial,        w.seed,          w.dim,       w.d,
          w.vnorm,        w.x,             w.theta,     w.m_star,
          w.m_ms,         w.m_kmm,         w.sin2_lhs,  w.sin2_rhs,
          w.path_length,  w.path_bound,    w.kappa_sum, w.kappa_steps,
          f(w.pass_mstar), f(w.pass_ms),   f(w.pass_kmm), f(w.pass_sin2),
          f(w.pass_path), f(w.pass_kappa), f(w.pass_consistency),
          w.wall_ms,      w.error.c_str()};
  return SUBPERT_OK;
}

long subpert_results_violations(const subpert_results* r) {
  return r == nullptr ? 0 : r->result.violations;
}

long subpert_results_errors(const subpert_results* r) {
  return r == nullptr ? 0 : r->result.errors;
}

size_t subpert_results_fixture_count(const subpert_results* r) {
  return r == nullptr ? 0 : r->fixture_paths.size();
}

const char* subpert_results_fixture(const subpert_results* r, size_t index) {
  if (r == nullptr || index >= r->fixture_paths.size()) return nullptr;
  return r->fixture_paths[index].c_str();
}

subpert_status subpert_results_stress(const subpert_results* r,
                                      subpert_stress_t* out) {
  SUBPERT_REQUIRE(r);
  SUBPERT_REQUIRE(out);
  if (!r->result.stress) return fail(SUBPERT_E_VALIDATION, "not a stress run");
  const auto& s = *r->result.stress;
  *out = {s.count, s.theta_min, s.theta_mean, s.theta_max, s.right_angle_events,
          s.rank_changes};
  return SUBPERT_OK;
}

subpert_status subpert_results_write(const subpert_results* r, const char* path,
                                     subpert_format format, int timestamp_header) {
  SUBPERT_REQUIRE(r);
  if (format != SUBPERT_FORMAT_CSV && format != SUBPERT_FORMAT_JSON) {
    return fail(SUBPERT_E_ARGUMENT, "unknown format");
  }
  return guarded([&] {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (path != nullptr && std::string(path) != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw subpert::IoError(std::string("cannot open ") + path);
      os = &file;
    }
    if (format == SUBPERT_FORMAT_CSV) {
      subpert::write_csv(*os, r->result.rows, timestamp_header != 0);
    } else {
      subpert::write_json(*os, r->result.rows);
    }
    os->flush();
    if (!*os) throw subpert::IoError("write failed");
  });
}

void subpert_results_destroy(subpert_results* r) { delete r; }

}  // extern "C"
