#pragma once

// Estimating functions for the maximal angle between spectral subspaces as a
// function of the relative perturbation strength x = ||V|| / d, together with
// the partition sequence kappa_n that drives the piecewise bound M_star.

#include <numbers>
#include <span>
#include <vector>

namespace subpert {

inline constexpr double kPi = std::numbers::pi;

struct ConstantsTable {
  double c_star;  // unique root of m_star(x) = pi/2
  double c_ms;    // unique root of m_ms(x) = pi/2
  double c_kmm;   // right end of the m_kmm domain, m_kmm(c_kmm) = pi/2
  double c_pi4;   // m_ms(c_pi4) = pi/4
  double C0;      // per-step angle (1/2) asin(4 pi / (pi^2 + 4))
  double q;       // kappa contraction ratio (pi^2 - 4) / (pi^2 + 4)
};

/// Closed-form values of every named constant.
ConstantsTable constants();

/// Clamps arguments that overshoot [-1, 1] by at most 1e-12 and throws
/// NumericError for anything further out.
double checked_asin(double arg);
double checked_acos(double arg);

/// kappa_n = (1 - q^n) / 2 with q = (pi^2 - 4)/(pi^2 + 4).
class KappaSequence {
 public:
  /// Shared immutable instance holding every term below 1/2 in double.
  static const KappaSequence& instance();

  double q() const { return q_; }
  double term(int n) const;
  /// max{n : kappa_n <= x}, by forward scan over the cached terms.
  int n_sharp(double x) const;
  /// Terms kappa_0 .. kappa_{count-1}.
  std::vector<double> prefix(int count) const;
  int cached_terms() const { return static_cast<int>(terms_.size()); }

 private:
  KappaSequence();
  double q_;
  std::vector<double> terms_;
};

double kappa(int n);
int n_sharp(double x);

/// Piecewise-arcsin bound; domain [0, 1/2).
double m_star(double x);
/// (pi/4) log(1/(1 - 2x)); domain [0, 1/2).
double m_ms(double x);
/// asin(pi x / (2 (1 - x))); domain [0, c_kmm] (closed).
double m_kmm(double x);

/// Throws ValidationError unless mu_0 = 0, every mu_n < 1/2 and
/// 0 < pi (mu_n - mu_{n-1}) / (1 - 2 mu_{n-1}) <= 1 for n >= 1.
void validate_step_sequence(std::span<const double> mu);

/// The estimating function built from an arbitrary admissible partition mu
/// (of which kappa is the optimal choice). Domain [0, mu.back()).
double general_f(std::span<const double> mu, double x);

enum class CurveKind { kMStar, kMs, kKmm, kGeneralF };

/// Uniform evaluator over the four estimating functions.
class BoundCurve {
 public:
  static BoundCurve mstar();
  static BoundCurve ms();
  static BoundCurve kmm();
  static BoundCurve general(std::vector<double> mu);

  CurveKind kind() const { return kind_; }
  double domain_end() const { return domain_end_; }
  /// True when domain_end itself belongs to the domain (m_kmm only).
  bool closed_at_end() const { return kind_ == CurveKind::kKmm; }
  bool in_domain(double x) const;
  double operator()(double x) const;
  const std::vector<double>& sequence() const { return mu_; }

 private:
  BoundCurve(CurveKind kind, double end, std::vector<double> mu)
      : kind_(kind), domain_end_(end), mu_(std::move(mu)) {}
  CurveKind kind_;
  double domain_end_;
  std::vector<double> mu_;
};

}  // namespace subpert
