#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace subpert {
namespace {

constexpr double kClamp = 1e-12;

void require_half_open(double x, const char* fn) {
  if (!(x >= 0.0 && x < 0.5)) {
    std::ostringstream os;
    os << fn << ": x = " << x << " outside [0, 1/2)";
    throw DomainError(os.str());
  }
}

double step_argument(double lo, double hi) {
  return kPi * (hi - lo) / (1.0 - 2.0 * lo);
}

}  // namespace

double checked_asin(double arg) {
  if (arg > 1.0 + kClamp || arg < -1.0 - kClamp || std::isnan(arg)) {
    std::ostringstream os;
    os << "asin argument " << arg << " outside [-1, 1]";
    throw NumericError(os.str());
  }
  return std::asin(std::clamp(arg, -1.0, 1.0));
}

double checked_acos(double arg) {
  if (arg > 1.0 + kClamp || arg < -1.0 - kClamp || std::isnan(arg)) {
    std::ostringstream os;
    os << "acos argument " << arg << " outside [-1, 1]";
    throw NumericError(os.str());
  }
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

ConstantsTable constants() {
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  const double pi6 = pi4 * pi2;
  const double s = pi2 + 4.0;
  ConstantsTable c{};
  c.c_star = 16.0 * (pi6 - 2.0 * pi4 + 32.0 * pi2 - 32.0) / (s * s * s * s);
  c.c_ms = 0.5 - 0.5 / std::exp(2.0);
  c.c_kmm = 2.0 / (2.0 + kPi);
  c.c_pi4 = 0.5 - 0.5 / std::exp(1.0);
  c.C0 = 0.5 * std::asin(4.0 * kPi / s);
  c.q = (pi2 - 4.0) / s;
  return c;
}

KappaSequence::KappaSequence() : q_((kPi * kPi - 4.0) / (kPi * kPi + 4.0)) {
  // Stop once a term rounds to 1/2: every admissible x < 1/2 is then
  // bracketed by the cache and the n_sharp scan terminates inside it.
  for (int n = 0;; ++n) {
    const double t = term(n);
    terms_.push_back(t);
    if (t >= 0.5) break;
  }
}

const KappaSequence& KappaSequence::instance() {
  static const KappaSequence seq;
  return seq;
}

double KappaSequence::term(int n) const {
  if (n < 0) throw DomainError("kappa: negative index");
  if (n < static_cast<int>(terms_.size())) return terms_[n];
  return 0.5 * (1.0 - std::pow(q_, n));
}

int KappaSequence::n_sharp(double x) const {
  require_half_open(x, "n_sharp");
  int n = 0;
  while (terms_[n + 1] <= x) ++n;
  return n;
}

std::vector<double> KappaSequence::prefix(int count) const {
  std::vector<double> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) out.push_back(term(n));
  return out;
}

double kappa(int n) { return KappaSequence::instance().term(n); }

int n_sharp(double x) { return KappaSequence::instance().n_sharp(x); }

double m_star(double x) {
  const auto& seq = KappaSequence::instance();
  const int n = seq.n_sharp(x);
  const double kn = seq.term(n);
  const double arg = step_argument(kn, x);
  if (arg < -kClamp || arg > 1.0 + kClamp) {
    throw InternalError("m_star: residual arcsin argument outside [0, 1]");
  }
  return n * constants().C0 + 0.5 * checked_asin(arg);
}

double m_ms(double x) {
  require_half_open(x, "m_ms");
  return -0.25 * kPi * std::log1p(-2.0 * x);
}

double m_kmm(double x) {
  const double end = constants().c_kmm;
  if (!(x >= 0.0 && x <= end)) {
    std::ostringstream os;
    os << "m_kmm: x = " << x << " outside [0, c_kmm]";
    throw DomainError(os.str());
  }
  return checked_asin(kPi * x / (2.0 * (1.0 - x)));
}

void validate_step_sequence(std::span<const double> mu) {
  if (mu.size() < 2) {
    throw ValidationError("step sequence needs at least mu_0 and mu_1");
  }
  if (mu[0] != 0.0) throw ValidationError("step sequence must start at 0");
  for (std::size_t n = 1; n < mu.size(); ++n) {
    if (!(mu[n] < 0.5)) {
      std::ostringstream os;
      os << "mu_" << n << " = " << mu[n] << " is not below 1/2";
      throw ValidationError(os.str());
    }
    // A maximal step sits at ratio 1 only up to rounding; allow the same
    // 1e-12 slack that checked_asin clamps.
    const double r = step_argument(mu[n - 1], mu[n]);
    if (!(r > 0.0 && r <= 1.0 + 1e-12)) {
      std::ostringstream os;
      os << "step " << n << " ratio " << r << " outside (0, 1]";
      throw ValidationError(os.str());
    }
  }
}

double general_f(std::span<const double> mu, double x) {
  validate_step_sequence(mu);
  if (!(x >= 0.0 && x < mu.back())) {
    std::ostringstream os;
    os << "general_f: x = " << x << " outside [0, " << mu.back() << ")";
    throw DomainError(os.str());
  }
  double acc = 0.0;
  std::size_t n = 0;
  while (mu[n + 1] <= x) {
    acc += 0.5 * checked_asin(step_argument(mu[n], mu[n + 1]));
    ++n;
  }
  return acc + 0.5 * checked_asin(step_argument(mu[n], x));
}

BoundCurve BoundCurve::mstar() { return {CurveKind::kMStar, 0.5, {}}; }
BoundCurve BoundCurve::ms() { return {CurveKind::kMs, 0.5, {}}; }
BoundCurve BoundCurve::kmm() {
  return {CurveKind::kKmm, constants().c_kmm, {}};
}
BoundCurve BoundCurve::general(std::vector<double> mu) {
  validate_step_sequence(mu);
  const double end = mu.back();
  return {CurveKind::kGeneralF, end, std::move(mu)};
}

bool BoundCurve::in_domain(double x) const {
  if (!(x >= 0.0)) return false;
  return closed_at_end() ? x <= domain_end_ : x < domain_end_;
}

double BoundCurve::operator()(double x) const {
  switch (kind_) {
    case CurveKind::kMStar:
      return m_star(x);
    case CurveKind::kMs:
      return m_ms(x);
    case CurveKind::kKmm:
      return m_kmm(x);
    case CurveKind::kGeneralF:
      return general_f(mu_, x);
  }
  throw InternalError("unknown curve kind");
}

}  // namespace subpert
