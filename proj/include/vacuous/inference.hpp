#pragma once

// Closed-form (p, q, r) for the hypothesis classes with explicit answers:
// linear equalities, single linear inequalities, y-centred balls and cubes,
// plus the two-toss Bernoulli example.

#include <cmath>

#include "vacuous/error.hpp"
#include "vacuous/geometry.hpp"
#include "vacuous/model.hpp"
#include "vacuous/specfun.hpp"

namespace vacuous {

/// {M : |M - centre|^2 <= threshold}.
class BallRegion {
 public:
  BallRegion(ObservationVector center, double threshold) : center_(std::move(center)), threshold_(threshold) {
    detail::require(std::isfinite(threshold) && threshold >= 0.0, "BallRegion: threshold must be >= 0");
  }

  [[nodiscard]] const ObservationVector& center() const { return center_; }
  /// Squared radius.
  [[nodiscard]] double threshold() const { return threshold_; }

 private:
  ObservationVector center_;
  double threshold_;
};

/// Axis-aligned cube {M : |M_i - centre_i| <= halfwidth for all i}.
class RectRegion {
 public:
  RectRegion(ObservationVector center, double halfwidth) : center_(std::move(center)), halfwidth_(halfwidth) {
    detail::require(std::isfinite(halfwidth) && halfwidth > 0.0, "RectRegion: halfwidth must be positive");
  }

  [[nodiscard]] const ObservationVector& center() const { return center_; }
  /// Absolute half-width, in data units.
  [[nodiscard]] double halfwidth() const { return halfwidth_; }

 private:
  ObservationVector center_;
  double halfwidth_;
};

namespace detail {

inline void require_law_dimension(const RadiusSquaredLaw& law, const ObservationVector& y, const char* op) {
  if (law.dimension() != y.dimension()) {
    throw DimensionMismatch(std::string(op) + ": law has dimension " + std::to_string(law.dimension()) +
                            " but observation has dimension " + std::to_string(y.dimension()));
  }
}

inline void require_alpha(double alpha, const char* op) {
  detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, std::string(op) + ": alpha must lie in (0, 1)");
}

inline constexpr double boundary_slack = 1e-9;

}  // namespace detail

/// H: CM = a. The sphere misses H with probability F(t_y) and straddles it
/// otherwise; an empty (inconsistent) H is certainly false, and C = 0 with
/// a = 0 makes H the whole space.
inline PosteriorTriple two_sided_triple(const LinearHypothesis& hypothesis, const ObservationVector& y,
                                        const RadiusSquaredLaw& law) {
  detail::require(hypothesis.side() == Side::equality, "two_sided_triple: hypothesis must be an equality");
  detail::require_law_dimension(law, y, "two_sided_triple");
  const SphereStatistic stat = t_statistic(hypothesis, y);
  if (!stat.consistent) return {0.0, 1.0, 0.0};
  if (stat.rank == 0) return {1.0, 0.0, 0.0};
  return PosteriorTriple::from_for_against(0.0, law_cdf(law, stat.t_y));
}

/// H: c'M <= a for a single constraint row.
inline PosteriorTriple one_sided_triple(const LinearHypothesis& hypothesis, const ObservationVector& y,
                                        const RadiusSquaredLaw& law) {
  detail::require(hypothesis.side() == Side::less_equal, "one_sided_triple: hypothesis must be an inequality");
  detail::require_law_dimension(law, y, "one_sided_triple");
  if (hypothesis.columns() != y.dimension()) {
    throw DimensionMismatch("one_sided_triple: contrast has " + std::to_string(hypothesis.columns()) +
                            " columns but observation has dimension " + std::to_string(y.dimension()));
  }
  if (hypothesis.rows() != 1) {
    throw UnsupportedHypothesis("multi-constraint one-sided unsupported: got " + std::to_string(hypothesis.rows()) +
                                " rows, expected a single constraint");
  }
  const Eigen::VectorXd c = hypothesis.contrast().row(0).transpose();
  const double a = hypothesis.rhs()[0];
  const double projected = c.dot(y.values());
  if (c.squaredNorm() == 0.0) {
    // 0 <= a holds everywhere or nowhere
    return a >= 0.0 ? PosteriorTriple{1.0, 0.0, 0.0} : PosteriorTriple{0.0, 1.0, 0.0};
  }
  const double t_y = t_statistic(hypothesis, y).t_y;
  const double f = law_cdf(law, t_y);
  if (projected <= a + detail::boundary_slack * (1.0 + std::fabs(a))) {
    return PosteriorTriple::from_for_against(f, 0.0);
  }
  return PosteriorTriple::from_for_against(0.0, f);
}

/// Dispatches on hypothesis.side().
inline PosteriorTriple linear_triple(const LinearHypothesis& hypothesis, const ObservationVector& y,
                                     const RadiusSquaredLaw& law) {
  return hypothesis.side() == Side::equality ? two_sided_triple(hypothesis, y, law)
                                             : one_sided_triple(hypothesis, y, law);
}

/// y-centred balls are sharp: r = 0.
inline PosteriorTriple ball_triple(const BallRegion& region, const ObservationVector& y,
                                   const RadiusSquaredLaw& law) {
  detail::require_law_dimension(law, y, "ball_triple");
  detail::require(region.center() == y, "ball_triple: region must be centred at the observation");
  const double p = law_cdf(law, region.threshold());
  return {p, 1.0 - p, 0.0};
}

/// The (1 - alpha) credible ball: squared radius is the (1 - alpha) quantile
/// of the radius law.
inline BallRegion credible_region(double alpha, const ObservationVector& y, const RadiusSquaredLaw& law) {
  detail::require_alpha(alpha, "credible_region");
  detail::require_law_dimension(law, y, "credible_region");
  return {y, law_quantile(law, 1.0 - alpha)};
}

/// The sphere lies inside the cube when its radius is at most h and wholly
/// outside when the radius exceeds the corner distance sqrt(k) h.
inline PosteriorTriple rect_triple(const RectRegion& region, const ObservationVector& y,
                                   const RadiusSquaredLaw& law) {
  detail::require_law_dimension(law, y, "rect_triple");
  detail::require(region.center() == y, "rect_triple: region must be centred at the observation");
  const double h2 = region.halfwidth() * region.halfwidth();
  const double p = law_cdf(law, h2);
  const double q = law_sf(law, law.dimension() * h2);
  return PosteriorTriple::from_for_against(p, q);
}

namespace detail {

// Half-widths are reported standardized (divided by s) for the known
// variance law, and absolute for the scaled F law, which has no s.
inline double standardize(const RadiusSquaredLaw& law, double halfwidth) {
  return law.family() == RadiusFamily::scaled_chi_squared ? halfwidth / std::sqrt(law.scale()) : halfwidth;
}

}  // namespace detail

/// Half-width with p(C) = 1 - alpha.
inline double lower_calibrated_halfwidth(double alpha, const RadiusSquaredLaw& law) {
  detail::require_alpha(alpha, "lower_calibrated_halfwidth");
  return detail::standardize(law, std::sqrt(law_quantile(law, 1.0 - alpha)));
}

/// Half-width with q(C) = alpha.
inline double upper_calibrated_halfwidth(double alpha, const RadiusSquaredLaw& law) {
  detail::require_alpha(alpha, "upper_calibrated_halfwidth");
  return detail::standardize(law, std::sqrt(law_quantile(law, 1.0 - alpha) / law.dimension()));
}

/// Standardized Bonferroni half-width z_{1 - alpha / 2k}.
inline double bonferroni_halfwidth(double alpha, int k) {
  detail::require_alpha(alpha, "bonferroni_halfwidth");
  detail::require(k >= 1, "bonferroni_halfwidth: k must be >= 1");
  return specfun::normal_quantile(1.0 - alpha / (2.0 * k));
}

enum class BernoulliAssertion { theta_at_most, theta_greater };

/// Coin example with tosses (1, 0): the posterior interval (U1, U2] has
/// U1 < U2 uniform order statistics, so {theta <= t} is believed when
/// U2 <= t and disbelieved when U1 >= t.
inline PosteriorTriple bernoulli_triple(double t, BernoulliAssertion assertion) {
  detail::require(std::isfinite(t) && t >= 0.0 && t <= 1.0, "bernoulli_triple: t must lie in [0, 1]");
  const double s = 1.0 - t;
  const PosteriorTriple at_most{t * t, s * s, 2.0 * t * s};
  return assertion == BernoulliAssertion::theta_at_most ? at_most : at_most.complement();
}

}  // namespace vacuous
