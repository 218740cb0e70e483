#include "perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bounds.hpp"
#include "errors.hpp"
#include "random.hpp"

namespace subpert {
namespace {

constexpr double kBoundSlack = 1e-8;
constexpr double kCertSlack = 1e-9;
constexpr double kAcuteMargin = 1e-12;

void fill_bounds(AnalysisRecord& rec) {
  rec.bound_mstar = m_star(rec.x);
  rec.bound_ms = m_ms(rec.x);
  rec.pass_mstar = rec.theta <= rec.bound_mstar + kBoundSlack;
  rec.pass_ms = rec.theta <= rec.bound_ms + kBoundSlack;
  if (rec.x <= constants().c_kmm) {
    rec.bound_kmm = m_kmm(rec.x);
    rec.pass_kmm = rec.theta <= *rec.bound_kmm + kBoundSlack;
  }
  rec.acute = rec.theta < kPi / 2 - kAcuteMargin;
  rec.sin2theta_lhs = rec.d * std::sin(2.0 * rec.theta);
  rec.sin2theta_rhs = kPi * rec.vnorm;
}

struct RandomSpectrum {
  std::vector<double> values;  // sorted
  std::vector<bool> selected;
  double gap = 0.0;
  SpectralSet cover;
};

RandomSpectrum random_partitioned_spectrum(int dim, SplitMix64& rng) {
  if (dim < 2) throw DimensionError("random instances need dim >= 2");
  for (;;) {
    RandomSpectrum s;
    s.values.resize(dim);
    for (int i = 0; i < dim; ++i) {
      s.values[i] = (i > 0 && rng.uniform() < 0.2)
                        ? s.values[rng.below(static_cast<std::uint64_t>(i))]
                        : rng.uniform(-3.0, 3.0);
    }
    std::sort(s.values.begin(), s.values.end());
    if (s.values.front() == s.values.back()) s.values.back() += 1.0;

    // Membership is decided per distinct value so multiplicities stay whole.
    s.selected.resize(dim);
    bool any_in = false;
    bool any_out = false;
    for (int i = 0; i < dim; ++i) {
      s.selected[i] = (i > 0 && s.values[i] == s.values[i - 1])
                          ? static_cast<bool>(s.selected[i - 1])
                          : rng.uniform() < 0.5;
      (s.selected[i] ? any_in : any_out) = true;
    }
    if (!any_in || !any_out) {
      const bool flip_to = !s.selected[dim - 1];
      for (int i = dim - 1; i >= 0 && s.values[i] == s.values[dim - 1]; --i) {
        s.selected[i] = flip_to;
      }
    }
    s.gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < dim; ++i) {
      if (s.selected[i] != s.selected[i - 1]) {
        s.gap = std::min(s.gap, s.values[i] - s.values[i - 1]);
      }
    }
    if (!(s.gap > 1e-4)) continue;

    std::vector<Interval> runs;
    for (int i = 0; i < dim; ++i) {
      if (!s.selected[i]) continue;
      if (i > 0 && s.selected[i - 1]) {
        runs.back().hi = s.values[i] + s.gap / 4;
      } else {
        runs.push_back({s.values[i] - s.gap / 4, s.values[i] + s.gap / 4});
      }
    }
    s.cover = SpectralSet::from_intervals(std::move(runs));
    return s;
  }
}

SymmetricMatrix rotate_spectrum(const std::vector<double>& values,
                                SplitMix64& rng) {
  const int dim = static_cast<int>(values.size());
  const Matrix q = random_orthonormal(dim, dim, rng);
  Vector lambda(dim);
  for (int i = 0; i < dim; ++i) lambda(i) = values[i];
  return SymmetricMatrix::symmetrized(q * lambda.asDiagonal() * q.transpose());
}

}  // namespace

SpectralSplit classify_dichotomy(const Vector& eigenvalues,
                                 const SpectralSet& near,
                                 const SpectralSet& far, double radius,
                                 double tol) {
  SpectralSplit split;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    const bool in_near = near.distance(lambda) <= radius + tol;
    const bool in_far = far.distance(lambda) <= radius + tol;
    if (in_near == in_far) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue " << lambda << " is "
         << (in_near ? "close to both" : "far from both")
         << " spectral components (radius " << radius << ")";
      throw AmbiguityError(os.str());
    }
    (in_near ? split.inside : split.outside).push_back(static_cast<int>(i));
  }
  return split;
}

PerturbationProblem::PerturbationProblem(SymmetricMatrix a, SpectralSet sigma,
                                         SymmetricMatrix v)
    : a_(std::move(a)),
      sigma_(std::move(sigma)),
      v_(std::move(v)),
      l_(a_ + v_),
      eig_a_(eig_sym(a_)) {
  if (v_.dim() != a_.dim()) throw DimensionError("A and V differ in dimension");
  const double anorm = std::max(std::abs(eig_a_.eigenvalues(0)),
                                std::abs(eig_a_.eigenvalues(a_.dim() - 1)));
  vnorm_ = operator_norm(v_);
  split_a_ = classify_eigenvalues(eig_a_.eigenvalues, sigma_,
                                  1e-9 * (1.0 + anorm));
  d_ = split_gap(eig_a_.eigenvalues, split_a_);
  if (!(vnorm_ < d_ / 2)) {
    std::ostringstream os;
    os << "perturbation too strong: ||V|| = " << vnorm_ << ", d = " << d_;
    throw ValidationError(os.str());
  }
  tol_ = 1e-9 * (1.0 + anorm + vnorm_);
  sigma_pts_ = eigenvalue_set(eig_a_.eigenvalues, split_a_.inside);
  rest_pts_ = eigenvalue_set(eig_a_.eigenvalues, split_a_.outside);
}

Projector PerturbationProblem::unperturbed_projector() const {
  return projector_from_split(eig_a_, split_a_);
}

Analysis analyze_detailed(const PerturbationProblem& p) {
  const auto eig_l = eig_sym(p.l());
  const SpectralSplit split = classify_dichotomy(
      eig_l.eigenvalues, p.sigma_points(), p.rest_points(), p.vnorm(), p.tol());

  Analysis out{AnalysisRecord{}, p.unperturbed_projector(),
               projector_from_split(eig_l, split)};
  AnalysisRecord& rec = out.record;
  rec.d = p.d();
  rec.vnorm = p.vnorm();
  rec.x = p.x();
  rec.omega = eigenvalue_set(eig_l.eigenvalues, split.inside);
  rec.omega_rest = eigenvalue_set(eig_l.eigenvalues, split.outside);
  rec.theta = maximal_angle(out.unperturbed, out.perturbed);
  rec.rank_unperturbed = out.unperturbed.rank();
  rec.rank_perturbed = out.perturbed.rank();
  rec.omega_localized =
      rec.omega.subset_of(p.sigma_points().neighborhood(p.vnorm()), p.tol());
  fill_bounds(rec);
  return out;
}

AnalysisRecord analyze(const PerturbationProblem& p) {
  return analyze_detailed(p).record;
}

Analysis analyze_posteriori_detailed(const SymmetricMatrix& a,
                                     const SymmetricMatrix& v,
                                     const SpectralSet& omega_target) {
  if (a.dim() != v.dim()) throw DimensionError("A and V differ in dimension");
  const SymmetricMatrix l = a + v;
  const auto eig_l = eig_sym(l);
  const auto eig_a = eig_sym(a);
  const double vnorm = operator_norm(v);
  const double lnorm = std::max(std::abs(eig_l.eigenvalues(0)),
                                std::abs(eig_l.eigenvalues(l.dim() - 1)));
  const double tol = 1e-9 * (1.0 + lnorm + vnorm);

  const SpectralSplit split_l =
      classify_eigenvalues(eig_l.eigenvalues, omega_target, tol);
  const double delta = split_gap(eig_l.eigenvalues, split_l);
  if (!(vnorm < delta / 2)) {
    std::ostringstream os;
    os << "a-posteriori gap too small: ||V|| = " << vnorm
       << ", delta = " << delta;
    throw ValidationError(os.str());
  }
  const SpectralSet omega = eigenvalue_set(eig_l.eigenvalues, split_l.inside);
  const SpectralSet omega_rest =
      eigenvalue_set(eig_l.eigenvalues, split_l.outside);
  const SpectralSplit split_a =
      classify_dichotomy(eig_a.eigenvalues, omega, omega_rest, vnorm, tol);

  Analysis out{AnalysisRecord{}, projector_from_split(eig_a, split_a),
               projector_from_split(eig_l, split_l)};
  AnalysisRecord& rec = out.record;
  rec.vnorm = vnorm;
  rec.delta = delta;
  rec.x = vnorm / delta;
  rec.omega = omega;
  rec.omega_rest = omega_rest;
  rec.theta = maximal_angle(out.unperturbed, out.perturbed);
  rec.rank_unperturbed = out.unperturbed.rank();
  rec.rank_perturbed = out.perturbed.rank();
  rec.omega_localized = true;
  rec.d = split_a.inside.empty() || split_a.outside.empty()
              ? 0.0
              : split_gap(eig_a.eigenvalues, split_a);
  fill_bounds(rec);
  // fill_bounds used d for the a-priori sin 2theta; the a-posteriori form is
  // the one guaranteed here.
  rec.sin2theta_lhs = delta * std::sin(2.0 * rec.theta);
  rec.bound_combined = m_star(vnorm / std::max(rec.d, delta));
  return out;
}

AnalysisRecord analyze_posteriori(const SymmetricMatrix& a,
                                  const SymmetricMatrix& v,
                                  const SpectralSet& omega_target) {
  return analyze_posteriori_detailed(a, v, omega_target).record;
}

PathTrace kappa_path(const PerturbationProblem& p) {
  const auto& seq = KappaSequence::instance();
  const double c0 = constants().C0;
  const double d = p.d();
  const double x = p.x();
  PathTrace trace;
  trace.n = seq.n_sharp(x);
  trace.steps_within_bounds = true;
  trace.steps_within_c0 = true;
  trace.gaps_ok = true;

  // State for L_j: its spectral split into omega_j / Omega_j.
  EigenDecomposition eig_j = p.eig_a();
  SpectralSplit split_j = p.split_a();
  Projector sub_j = p.unperturbed_projector();

  auto step_to = [&](const SymmetricMatrix& next, double coupling, int j,
                     double t) {
    PathStep step;
    step.j = j;
    step.t = t;
    step.coupling = coupling;
    step.delta = split_gap(eig_j.eigenvalues, split_j);
    if (step.delta < d * (1.0 - 2.0 * seq.term(j)) - p.tol()) {
      trace.gaps_ok = false;
    }
    auto eig_next = eig_sym(next);
    const SpectralSplit split_next = classify_dichotomy(
        eig_next.eigenvalues, eigenvalue_set(eig_j.eigenvalues, split_j.inside),
        eigenvalue_set(eig_j.eigenvalues, split_j.outside), coupling, p.tol());
    Projector sub_next = projector_from_split(eig_next, split_next);
    step.theta = maximal_angle(sub_j, sub_next);
    step.bound = 0.5 * checked_asin(kPi * coupling / step.delta);
    if (step.theta > step.bound + kCertSlack) trace.steps_within_bounds = false;
    if (step.theta > c0 + kCertSlack) trace.steps_within_c0 = false;
    trace.sum += step.theta;
    eig_j = std::move(eig_next);
    split_j = split_next;
    sub_j = std::move(sub_next);
    return step;
  };

  for (int j = 0; j < trace.n; ++j) {
    const double t_next = seq.term(j + 1) / x;
    const SymmetricMatrix l_next = p.a() + p.v().scaled(t_next);
    trace.steps.push_back(step_to(
        l_next, (seq.term(j + 1) - seq.term(j)) * d, j, seq.term(j) / x));
  }
  const double tn = trace.n == 0 ? 0.0 : seq.term(trace.n) / x;
  trace.final_step =
      step_to(p.l(), (x - seq.term(trace.n)) * d, trace.n, tn);
  trace.theta_direct = maximal_angle(p.unperturbed_projector(), sub_j);
  trace.telescoping_ok = trace.theta_direct <= trace.sum + kCertSlack;
  return trace;
}

Sin2ThetaReport sin2theta_check(const PerturbationProblem& p,
                                const AnalysisRecord& record) {
  Sin2ThetaReport rep;
  rep.rhs = kPi * p.vnorm();
  if (!(record.theta < kPi / 2 - kAcuteMargin)) {
    rep.skipped = true;
    return rep;
  }
  const double s2 = std::sin(2.0 * record.theta);
  rep.apriori_lhs = p.d() * s2;
  rep.apriori_pass = rep.apriori_lhs <= rep.rhs + kCertSlack;
  const double dist_post = distance(record.omega, record.omega_rest);
  rep.aposteriori_lhs = std::isinf(dist_post) ? 0.0 : dist_post * s2;
  rep.aposteriori_pass = rep.aposteriori_lhs <= rep.rhs + kCertSlack;
  if (p.vnorm() <= constants().c_pi4 * p.d()) {
    rep.pi4_applicable = true;
    rep.pi4_bound = 0.5 * checked_asin(kPi * p.vnorm() / p.d());
    rep.pi4_pass = record.theta <= rep.pi4_bound + kCertSlack;
  }
  return rep;
}

std::vector<double> uniform_partition(double a, double b, int points) {
  if (points < 2) throw ValidationError("a partition needs at least 2 points");
  std::vector<double> t(points);
  for (int k = 0; k < points; ++k) {
    t[k] = a + (b - a) * static_cast<double>(k) / (points - 1);
  }
  t.back() = b;
  return t;
}

ProjectionPathReport projection_path(const PerturbationProblem& p,
                                     std::span<const double> partition,
                                     PairMode mode) {
  if (partition.size() < 2) {
    throw ValidationError("partition needs at least two points");
  }
  for (std::size_t k = 0; k < partition.size(); ++k) {
    if (!(partition[k] >= 0.0 && partition[k] <= 1.0)) {
      throw ValidationError("partition points must lie in [0, 1]");
    }
    if (k > 0 && !(partition[k] > partition[k - 1])) {
      throw ValidationError("partition must be strictly increasing");
    }
  }
  const double d = p.d();
  const double vnorm = p.vnorm();
  ProjectionPathReport rep;
  rep.t.assign(partition.begin(), partition.end());

  std::vector<Projector> gamma;
  gamma.reserve(partition.size());
  for (double t : partition) {
    const SymmetricMatrix lt = p.a() + p.v().scaled(t);
    const auto eig = eig_sym(lt);
    const SpectralSplit split = classify_dichotomy(
        eig.eigenvalues, p.sigma_points(), p.rest_points(), vnorm, p.tol());
    gamma.push_back(projector_from_split(eig, split));
  }

  // ||P - Q|| = max(||P^perp Q||, ||Q^perp P||), evaluated on the small
  // cross blocks of the bases instead of the full n x n difference. For equal
  // ranks the CS decomposition makes the two blocks share singular values.
  auto pair_norm = [&](std::size_t i, std::size_t j) {
    const Projector& pi = gamma[i];
    const Projector& pj = gamma[j];
    if (pi.rank() == pj.rank()) {
      return operator_norm(Matrix(pi.complement_basis().transpose() * pj.basis()));
    }
    return std::max(
        operator_norm(Matrix(pi.complement_basis().transpose() * pj.basis())),
        operator_norm(Matrix(pj.complement_basis().transpose() * pi.basis())));
  };
  auto pair_bound = [&](double s, double t) {
    return 0.5 * kPi * vnorm * (t - s) / (d - vnorm * (t + s));
  };

  const std::size_t m = partition.size();
  rep.pairwise_pass = true;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t last = mode == PairMode::kAll ? m : i + 2;
    for (std::size_t j = i + 1; j < last; ++j) {
      const double nrm = pair_norm(i, j);
      const double bnd = pair_bound(partition[i], partition[j]);
      if (j == i + 1) {
        rep.step_norms.push_back(nrm);
        rep.length += nrm;
        rep.angle_sum += checked_asin(std::min(nrm, 1.0));
      }
      ++rep.pairs_checked;
      if (nrm > bnd + kCertSlack) {
        ++rep.pair_violations;
        rep.pairwise_pass = false;
      }
      if (bnd > 0.0) rep.max_pair_ratio = std::max(rep.max_pair_ratio, nrm / bnd);
    }
  }
  const double a = partition.front();
  const double b = partition.back();
  rep.log_bound =
      0.25 * kPi * std::log((d - 2.0 * a * vnorm) / (d - 2.0 * b * vnorm));
  rep.endpoint_angle = checked_asin(std::min(pair_norm(0, m - 1), 1.0));
  rep.length_pass = rep.length <= rep.log_bound + kCertSlack;
  rep.endpoint_pass = rep.endpoint_angle <= rep.log_bound + kCertSlack;
  rep.triangle_pass = rep.endpoint_angle <= rep.angle_sum + kCertSlack;
  return rep;
}

PerturbationProblem random_problem(int dim, double x, std::uint64_t seed) {
  if (!(x >= 0.0 && x < 0.5)) throw DomainError("x must lie in [0, 1/2)");
  SplitMix64 rng(seed);
  RandomSpectrum s = random_partitioned_spectrum(dim, rng);
  SymmetricMatrix a = rotate_spectrum(s.values, rng);
  const double d = gap(a, s.cover);
  SymmetricMatrix v = random_symmetric_with_norm(dim, x * d, rng.next());
  return PerturbationProblem(std::move(a), std::move(s.cover), std::move(v));
}

PosterioriInstance random_posteriori_instance(int dim, double x,
                                              std::uint64_t seed) {
  if (!(x >= 0.0 && x < 0.5)) throw DomainError("x must lie in [0, 1/2)");
  SplitMix64 rng(seed);
  RandomSpectrum s = random_partitioned_spectrum(dim, rng);
  const SymmetricMatrix l = rotate_spectrum(s.values, rng);
  const double delta = gap(l, s.cover);
  SymmetricMatrix v = random_symmetric_with_norm(dim, x * delta, rng.next());
  SymmetricMatrix a = l - v;
  return {std::move(a), std::move(v), std::move(s.cover)};
}

}  // namespace subpert
