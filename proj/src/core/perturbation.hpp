#pragma once

// End-to-end certification of rotation bounds for spectral subspaces of
// L = A + V: exact maximal angles against every applicable estimating
// function, the sin 2theta estimates, the kappa-path construction and the
// projection path t -> E_{A+tV}.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "projector.hpp"
#include "subspace.hpp"

namespace subpert {

/// Splits eigenvalues into those within radius + tol of `near` and those
/// within radius + tol of `far`. Throws AmbiguityError if an eigenvalue
/// qualifies for both classes or for neither.
SpectralSplit classify_dichotomy(const Vector& eigenvalues,
                                 const SpectralSet& near,
                                 const SpectralSet& far, double radius,
                                 double tol);

class PerturbationProblem {
 public:
  /// Rejects (ValidationError) unless sigma selects a nonempty proper subset
  /// of spec(A) and ||V|| < d / 2.
  PerturbationProblem(SymmetricMatrix a, SpectralSet sigma, SymmetricMatrix v);

  const SymmetricMatrix& a() const { return a_; }
  const SymmetricMatrix& v() const { return v_; }
  const SymmetricMatrix& l() const { return l_; }
  const SpectralSet& sigma() const { return sigma_; }
  int dim() const { return a_.dim(); }
  double d() const { return d_; }
  double vnorm() const { return vnorm_; }
  double x() const { return vnorm_ / d_; }
  /// Classification tolerance 1e-9 (1 + ||A|| + ||V||).
  double tol() const { return tol_; }

  const EigenDecomposition& eig_a() const { return eig_a_; }
  const SpectralSplit& split_a() const { return split_a_; }
  /// spec(A) intersected with sigma, and its complement Sigma, as point sets.
  const SpectralSet& sigma_points() const { return sigma_pts_; }
  const SpectralSet& rest_points() const { return rest_pts_; }
  Projector unperturbed_projector() const;

 private:
  SymmetricMatrix a_;
  SpectralSet sigma_;
  SymmetricMatrix v_;
  SymmetricMatrix l_;
  EigenDecomposition eig_a_;
  SpectralSplit split_a_;
  SpectralSet sigma_pts_;
  SpectralSet rest_pts_;
  double d_;
  double vnorm_;
  double tol_;
};

struct AnalysisRecord {
  double d = 0.0;
  double vnorm = 0.0;
  double x = 0.0;
  double theta = 0.0;
  SpectralSet omega;      // perturbed spectral component
  SpectralSet omega_rest; // remainder of spec(L)
  double bound_mstar = 0.0;
  double bound_ms = 0.0;
  std::optional<double> bound_kmm;
  bool pass_mstar = false;
  bool pass_ms = false;
  std::optional<bool> pass_kmm;
  double sin2theta_lhs = 0.0;  // d sin(2 theta), a priori
  double sin2theta_rhs = 0.0;  // pi ||V||
  int rank_unperturbed = 0;
  int rank_perturbed = 0;
  bool acute = true;             // theta < pi/2 beyond clamp
  bool omega_localized = false;  // omega within O_||V||(sigma)
  // A-posteriori runs only.
  std::optional<double> delta;
  std::optional<double> bound_combined;
};

/// Record plus the subspaces it was computed from.
struct Analysis {
  AnalysisRecord record;
  Projector unperturbed;
  Projector perturbed;
};

Analysis analyze_detailed(const PerturbationProblem& p);
AnalysisRecord analyze(const PerturbationProblem& p);

/// omega is selected from spec(L) by omega_target; sigma = spec(A) within
/// ||V|| of omega. Requires delta = gap(L, omega_target) > 2 ||V||. The
/// bounds use x = ||V|| / delta; bound_combined uses max(d, delta).
Analysis analyze_posteriori_detailed(const SymmetricMatrix& a,
                                     const SymmetricMatrix& v,
                                     const SpectralSet& omega_target);
AnalysisRecord analyze_posteriori(const SymmetricMatrix& a,
                                  const SymmetricMatrix& v,
                                  const SpectralSet& omega_target);

struct PathStep {
  int j = 0;
  double t = 0.0;          // kappa_j d / ||V||
  double coupling = 0.0;   // ||W_j||
  double delta = 0.0;      // gap of L_j between omega_j and Omega_j
  double theta = 0.0;      // theta(L_j, L_{j+1}) (last step: theta(L_n, L))
  double bound = 0.0;      // (1/2) asin(pi ||W_j|| / delta_j)
};

struct PathTrace {
  int n = 0;  // n_sharp(x)
  std::vector<PathStep> steps;  // j = 0 .. n-1
  PathStep final_step;          // L_n -> L
  double sum = 0.0;
  double theta_direct = 0.0;
  bool steps_within_bounds = false;
  bool steps_within_c0 = false;
  bool gaps_ok = false;         // delta_j >= d (1 - 2 kappa_j)
  bool telescoping_ok = false;  // theta_direct <= sum
  int segments() const { return static_cast<int>(steps.size()) + 1; }
  bool pass() const {
    return steps_within_bounds && steps_within_c0 && gaps_ok && telescoping_ok;
  }
};

PathTrace kappa_path(const PerturbationProblem& p);

struct Sin2ThetaReport {
  bool skipped = false;  // non-acute record
  double apriori_lhs = 0.0;      // d sin 2theta
  double aposteriori_lhs = 0.0;  // dist(omega, Omega) sin 2theta
  double rhs = 0.0;              // pi ||V||
  bool apriori_pass = true;
  bool aposteriori_pass = true;
  bool pi4_applicable = false;   // ||V|| <= c_pi4 d
  double pi4_bound = 0.0;        // (1/2) asin(pi ||V|| / d)
  bool pi4_pass = true;
  bool pass() const { return apriori_pass && aposteriori_pass && pi4_pass; }
};

Sin2ThetaReport sin2theta_check(const PerturbationProblem& p,
                                const AnalysisRecord& record);

struct ProjectionPathReport {
  std::vector<double> t;
  std::vector<double> step_norms;  // ||Gamma(t_{k+1}) - Gamma(t_k)||
  int pairs_checked = 0;
  int pair_violations = 0;
  double max_pair_ratio = 0.0;     // max ||dGamma|| / bound over pairs
  double length = 0.0;             // sum of step norms
  double log_bound = 0.0;          // (pi/4) log((d - 2a||V||)/(d - 2b||V||))
  double endpoint_angle = 0.0;     // asin ||Gamma(b) - Gamma(a)||
  double angle_sum = 0.0;          // sum of asin step norms
  bool pairwise_pass = false;
  bool length_pass = false;    // length <= log_bound
  bool endpoint_pass = false;  // endpoint_angle <= log_bound
  bool triangle_pass = false;  // endpoint_angle <= angle_sum
  bool pass() const {
    return pairwise_pass && length_pass && endpoint_pass && triangle_pass;
  }
};

enum class PairMode { kConsecutive, kAll };

/// partition: strictly increasing points in [0, 1], at least two.
ProjectionPathReport projection_path(const PerturbationProblem& p,
                                     std::span<const double> partition,
                                     PairMode mode = PairMode::kAll);

/// Uniform partition of [a, b] with `points` points.
std::vector<double> uniform_partition(double a, double b, int points);

/// Seeded ensemble instance: A = Q diag(lambda) Q^T with random eigenvalues
/// (occasionally repeated), sigma a random union of eigenvalue runs covered
/// with margin d/4, and V scaled to ||V|| = x d.
PerturbationProblem random_problem(int dim, double x, std::uint64_t seed);

/// Seeded a-posteriori instance: L built first with a designated component
/// omega isolated by delta, V scaled to ||V|| = x delta and A = L - V.
struct PosterioriInstance {
  SymmetricMatrix a;
  SymmetricMatrix v;
  SpectralSet omega_target;
};
PosterioriInstance random_posteriori_instance(int dim, double x,
                                              std::uint64_t seed);

}  // namespace subpert
