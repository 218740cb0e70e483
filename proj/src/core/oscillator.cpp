#include "oscillator.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "random.hpp"

namespace subpert {
namespace {

// All occupation vectors of length dims summing to total, in lexicographic
// order.
void enumerate(int dims, int total, std::vector<int>& prefix,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == dims - 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    prefix.push_back(k);
    enumerate(dims, total - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

int OscillatorModel::even_dim() const {
  int c = 0;
  for (bool e : even) c += e ? 1 : 0;
  return c;
}

long binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

OscillatorModel build_oscillator(int dims, int n_max, long max_dim) {
  if (dims < 1) throw ValidationError("oscillator needs N >= 1");
  if (n_max < 1) throw ValidationError("oscillator needs n_max >= 1");
  long total = 0;
  std::vector<long> mult;
  for (int n = 0; n <= n_max; ++n) {
    mult.push_back(binomial(dims + n - 1, n));
    total += mult.back();
    if (total > max_dim) {
      std::ostringstream os;
      os << "truncated oscillator dimension exceeds cap " << max_dim;
      throw SizeError(os.str());
    }
  }

  OscillatorModel m;
  m.dims = dims;
  m.n_max = n_max;
  m.multiplicities = mult;
  std::vector<double> diag;
  std::vector<double> even_levels;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<std::vector<int>> block;
    std::vector<int> prefix;
    enumerate(dims, n, prefix, block);
    for (auto& mi : block) {
      m.multi_index.push_back(std::move(mi));
      m.level.push_back(n);
      m.even.push_back(n % 2 == 0);
      diag.push_back(n + 0.5 * dims);
    }
    if (n % 2 == 0) even_levels.push_back(n + 0.5 * dims);
  }
  m.matrix = SymmetricMatrix::diagonal(diag);
  m.sigma_even = SpectralSet::points(even_levels);
  return m;
}

OscillatorResult oscillator_experiment(int dims, int n_max, double vnorm,
                                       std::uint64_t seed,
                                       bool parity_preserving, long max_dim) {
  if (!(vnorm >= 0.0 && vnorm < 0.5)) {
    throw ValidationError("oscillator experiment needs 0 <= ||V|| < 1/2");
  }
  const OscillatorModel model = build_oscillator(dims, n_max, max_dim);
  const int n = model.total_dim();

  Matrix raw = random_symmetric(n, seed).matrix();
  if (parity_preserving) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (model.even[i] != model.even[j]) raw(i, j) = 0.0;
      }
    }
  }
  SymmetricMatrix v = SymmetricMatrix::zero(n);
  if (vnorm > 0.0) {
    const double n0 = operator_norm(raw);
    v = SymmetricMatrix(Matrix(raw * (vnorm / n0)));
  }

  const PerturbationProblem problem(model.matrix, model.sigma_even, v);
  const Analysis an = analyze_detailed(problem);

  OscillatorResult out;
  out.record = an.record;
  const double direct = operator_norm(
      Matrix(an.unperturbed.matrix() - an.perturbed.matrix()));
  const double comp =
      operator_norm(Matrix(an.unperturbed.complement().matrix() -
                           an.perturbed.complement().matrix()));
  out.complement_theta =
      maximal_angle(an.unperturbed.complement(), an.perturbed.complement());
  out.complement_equal = std::abs(direct - comp) < 1e-12;

  const Vector ev = eigenvalues_sym(problem.l());
  out.cluster_counts.assign(model.n_max + 1, 0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    for (int lev = 0; lev <= model.n_max; ++lev) {
      if (std::abs(ev(i) - (lev + 0.5 * dims)) <= vnorm + problem.tol()) {
        ++out.cluster_counts[lev];
      }
    }
  }
  out.localization_exact = out.cluster_counts == model.multiplicities;
  out.omega_count = an.perturbed.rank();
  out.even_dim = model.even_dim();
  return out;
}

}  // namespace subpert
