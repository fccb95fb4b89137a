#pragma once

// Evidence body of the vacuous-orientation model. Combining additive error,
// the observed data, the chi-squared error configuration and the variance
// assumption leaves a random sphere centred at y whose squared radius follows
// a RadiusSquaredLaw. Only that end product is represented here.

#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "vacuous/error.hpp"
#include "vacuous/specfun.hpp"

namespace vacuous {

/// Observed measurements y in R^k; the centre of every posterior sphere.
class ObservationVector {
 public:
  explicit ObservationVector(Eigen::VectorXd values) : values_(std::move(values)) {
    detail::require(values_.size() >= 1, "ObservationVector: dimension must be >= 1");
    detail::require(values_.allFinite(), "ObservationVector: entries must be finite");
  }

  ObservationVector(std::initializer_list<double> values)
      : ObservationVector(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                             static_cast<Eigen::Index>(values.size()))) {}

  static ObservationVector from(std::span<const double> values) {
    return ObservationVector(
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  }

  [[nodiscard]] int dimension() const { return static_cast<int>(values_.size()); }
  [[nodiscard]] const Eigen::VectorXd& values() const { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

  friend bool operator==(const ObservationVector& lhs, const ObservationVector& rhs) {
    return lhs.values_.size() == rhs.values_.size() && lhs.values_ == rhs.values_;
  }

 private:
  Eigen::VectorXd values_;
};

/// S^2 = s2, known.
struct KnownVariance {
  double s2 = 1.0;
};

/// S^2 ~ Inv-chi^2 with nu degrees of freedom.
struct InvChiSquaredPrior {
  int nu = 1;
};

using VarianceSpec = std::variant<KnownVariance, InvChiSquaredPrior>;

enum class RadiusFamily { scaled_chi_squared, scaled_f };

/// Distribution of the squared radius of the posterior random sphere.
///
/// scaled_chi_squared: s^2 * chi^2_k (known variance).
/// scaled_f: (k / nu) * F(k, nu), the law of U * U_s with U ~ chi^2_k and
/// U_s ~ Inv-chi^2_nu independent.
class RadiusSquaredLaw {
 public:
  static RadiusSquaredLaw scaled_chi_squared(int k, double scale) {
    detail::require(k >= 1, "RadiusSquaredLaw: k must be >= 1");
    detail::require(std::isfinite(scale) && scale > 0.0, "RadiusSquaredLaw: scale must be positive");
    return RadiusSquaredLaw(RadiusFamily::scaled_chi_squared, k, 0, scale);
  }

  static RadiusSquaredLaw scaled_f(int k, int nu) {
    detail::require(k >= 1, "RadiusSquaredLaw: k must be >= 1");
    detail::require(nu >= 1, "RadiusSquaredLaw: nu must be >= 1");
    return RadiusSquaredLaw(RadiusFamily::scaled_f, k, nu, static_cast<double>(k) / nu);
  }

  [[nodiscard]] RadiusFamily family() const { return family_; }
  [[nodiscard]] int dimension() const { return k_; }
  /// Denominator degrees of freedom; 0 for the chi-squared family.
  [[nodiscard]] int nu() const { return nu_; }
  [[nodiscard]] double scale() const { return scale_; }

  friend bool operator==(const RadiusSquaredLaw&, const RadiusSquaredLaw&) = default;

 private:
  RadiusSquaredLaw(RadiusFamily family, int k, int nu, double scale)
      : family_(family), k_(k), nu_(nu), scale_(scale) {}

  RadiusFamily family_;
  int k_;
  int nu_;
  double scale_;
};

inline RadiusSquaredLaw radius_law(int k, const VarianceSpec& spec) {
  detail::require(k >= 1, "radius_law: k must be >= 1");
  if (const auto* known = std::get_if<KnownVariance>(&spec)) {
    detail::require(std::isfinite(known->s2) && known->s2 > 0.0, "radius_law: s2 must be positive");
    return RadiusSquaredLaw::scaled_chi_squared(k, known->s2);
  }
  const auto& prior = std::get<InvChiSquaredPrior>(spec);
  detail::require(prior.nu >= 1, "radius_law: nu must be >= 1");
  return RadiusSquaredLaw::scaled_f(k, prior.nu);
}

inline double law_cdf(const RadiusSquaredLaw& law, double t) {
  detail::require(std::isfinite(t) && t >= 0.0, "law_cdf: t must be finite and >= 0");
  const double x = t / law.scale();
  if (law.family() == RadiusFamily::scaled_chi_squared) return specfun::chi2_cdf(law.dimension(), x);
  return specfun::f_cdf(law.dimension(), law.nu(), x);
}

/// 1 - law_cdf without cancellation in the upper tail.
inline double law_sf(const RadiusSquaredLaw& law, double t) {
  detail::require(std::isfinite(t) && t >= 0.0, "law_sf: t must be finite and >= 0");
  const double x = t / law.scale();
  if (law.family() == RadiusFamily::scaled_chi_squared) return specfun::chi2_sf(law.dimension(), x);
  return specfun::f_sf(law.dimension(), law.nu(), x);
}

inline double law_quantile(const RadiusSquaredLaw& law, double p) {
  detail::require(std::isfinite(p) && p >= 0.0 && p < 1.0, "law_quantile: p must lie in [0, 1)");
  if (law.family() == RadiusFamily::scaled_chi_squared) {
    return law.scale() * specfun::chi2_quantile(law.dimension(), p);
  }
  return law.scale() * specfun::f_quantile(law.dimension(), law.nu(), p);
}

/// Weights of evidence for (p), against (q) and don't know (r) an assertion.
class PosteriorTriple {
 public:
  static constexpr double sum_tolerance = 1e-12;

  PosteriorTriple(double p, double q, double r) : p_(p), q_(q), r_(r) {
    for (double v : {p, q, r}) {
      detail::require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
                      "PosteriorTriple: components must lie in [0, 1]");
    }
    detail::require(std::fabs(p + q + r - 1.0) < sum_tolerance, "PosteriorTriple: p + q + r must equal 1");
  }

  /// Builds the triple from p and q with r = 1 - p - q. Rounding residue
  /// below the sum tolerance is absorbed into r.
  static PosteriorTriple from_for_against(double p, double q) {
    double r = 1.0 - p - q;
    if (r < 0.0 && r > -sum_tolerance) r = 0.0;
    return {p, q, r};
  }

  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] double q() const { return q_; }
  [[nodiscard]] double r() const { return r_; }

  /// Triple of the complementary assertion: q(H) = p(H^c).
  [[nodiscard]] PosteriorTriple complement() const { return {q_, p_, r_}; }

  friend bool operator==(const PosteriorTriple&, const PosteriorTriple&) = default;

 private:
  double p_;
  double q_;
  double r_;
};

}  // namespace vacuous
