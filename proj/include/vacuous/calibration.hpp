#pragma once

// Seeded Monte Carlo harness: null-model simulations for the pairwise
// contrast r-values, Bonferroni familywise error and credible-ball coverage,
// and a brute-force (p, q, r) oracle that classifies sampled spheres against
// the hypothesis geometry directly.
//
// Replicate i always draws from substream i of the root seed, so every result
// is identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "vacuous/error.hpp"
#include "vacuous/geometry.hpp"
#include "vacuous/inference.hpp"
#include "vacuous/model.hpp"
#include "vacuous/random.hpp"
#include "vacuous/specfun.hpp"

namespace vacuous {

struct SimulationConfig {
  int k = 2;
  int reps = 5000;
  std::uint64_t seed = 0;
  double s2 = 1.0;
  std::vector<double> alphas{0.05, 0.2};
  int workers = 1;

  void validate() const {
    detail::require(k >= 1, "SimulationConfig: k must be >= 1");
    detail::require(reps >= 1, "SimulationConfig: reps must be >= 1");
    detail::require(std::isfinite(s2) && s2 > 0.0, "SimulationConfig: s2 must be positive");
    detail::require(workers >= 1, "SimulationConfig: workers must be >= 1");
    for (double alpha : alphas) {
      detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
                      "SimulationConfig: alphas must lie in (0, 1)");
    }
  }
};

struct CalibrationReport {
  SimulationConfig config;
  std::vector<double> r_values;  ///< pairwise-contrast r(H), one per replicate
  double ks_uniform = 0.0;
  std::vector<double> fwer_bonferroni;  ///< parallel to config.alphas
  std::vector<double> coverage;         ///< parallel to config.alphas
};

namespace detail {

template <class Fn>
void for_each_replicate(int reps, int workers, Fn&& fn) {
  const int threads = std::max(1, std::min(workers, reps));
  if (threads == 1) {
    for (int i = 0; i < reps; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&fn, w, threads, reps] {
      for (int i = w; i < reps; i += threads) fn(i);
    });
  }
}

}  // namespace detail

/// Replicate `replicate` of the null model: k i.i.d. N(0, s2) draws.
inline Eigen::VectorXd null_observation(int k, double s2, std::uint64_t seed, std::uint64_t replicate) {
  CounterStream stream(seed, replicate);
  const double s = std::sqrt(s2);
  Eigen::VectorXd y(k);
  for (int i = 0; i < k; ++i) y[i] = s * stream.normal();
  return y;
}

inline std::vector<ObservationVector> simulate_null(int k, int reps, std::uint64_t seed, double s2) {
  SimulationConfig{.k = k, .reps = reps, .seed = seed, .s2 = s2}.validate();
  std::vector<ObservationVector> out;
  out.reserve(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) out.emplace_back(null_observation(k, s2, seed, static_cast<std::uint64_t>(i)));
  return out;
}

/// One-sample Kolmogorov-Smirnov distance between the ECDF of `values` and
/// the Uniform(0, 1) CDF.
inline double ks_statistic(std::span<const double> values) {
  detail::require(!values.empty(), "ks_statistic: values must be non-empty");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) detail::require(std::isfinite(v), "ks_statistic: values must be finite");
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double u = std::clamp(sorted[i], 0.0, 1.0);
    distance = std::max({distance, (static_cast<double>(i) + 1.0) / n - u, u - static_cast<double>(i) / n});
  }
  return distance;
}

/// r(H) for H: all pairwise means equal, across null replicates.
inline CalibrationReport pairwise_r_distribution(const SimulationConfig& config) {
  config.validate();
  detail::require(config.k >= 2, "pairwise_r_distribution: k must be >= 2");
  const LinearHypothesis hypothesis(pairwise_contrast_matrix(config.k), Eigen::VectorXd::Zero(config.k * (config.k - 1) / 2));
  const ProjectedHypothesis projected(hypothesis);
  const auto law = RadiusSquaredLaw::scaled_chi_squared(config.k, config.s2);

  CalibrationReport report;
  report.config = config;
  report.r_values.resize(static_cast<std::size_t>(config.reps));
  detail::for_each_replicate(config.reps, config.workers, [&](int i) {
    const Eigen::VectorXd y = null_observation(config.k, config.s2, config.seed, static_cast<std::uint64_t>(i));
    report.r_values[static_cast<std::size_t>(i)] = law_sf(law, projected.t_statistic(y));
  });
  report.ks_uniform = ks_statistic(report.r_values);
  return report;
}

/// Fraction of null replicates in which some pairwise |y_i - y_j| exceeds
/// sqrt(2) s z_{1 - alpha / 2m}, m = k(k-1)/2; one entry per alpha.
inline std::vector<double> bonferroni_fwer(const SimulationConfig& config) {
  config.validate();
  detail::require(config.k >= 2, "bonferroni_fwer: k must be >= 2");
  std::vector<double> ranges(static_cast<std::size_t>(config.reps));
  detail::for_each_replicate(config.reps, config.workers, [&](int i) {
    const Eigen::VectorXd y = null_observation(config.k, config.s2, config.seed, static_cast<std::uint64_t>(i));
    ranges[static_cast<std::size_t>(i)] = y.maxCoeff() - y.minCoeff();
  });
  const double comparisons = 0.5 * config.k * (config.k - 1);
  std::vector<double> out;
  for (double alpha : config.alphas) {
    const double cutoff = std::sqrt(2.0 * config.s2) * specfun::normal_quantile(1.0 - alpha / (2.0 * comparisons));
    const auto rejected = std::count_if(ranges.begin(), ranges.end(), [cutoff](double r) { return r > cutoff; });
    out.push_back(static_cast<double>(rejected) / config.reps);
  }
  return out;
}

/// Fraction of null replicates whose (1 - alpha) credible ball contains the
/// true mean vector (zero); one entry per alpha.
inline std::vector<double> coverage_check(const SimulationConfig& config) {
  config.validate();
  const auto law = RadiusSquaredLaw::scaled_chi_squared(config.k, config.s2);
  std::vector<double> squared_norms(static_cast<std::size_t>(config.reps));
  detail::for_each_replicate(config.reps, config.workers, [&](int i) {
    squared_norms[static_cast<std::size_t>(i)] =
        null_observation(config.k, config.s2, config.seed, static_cast<std::uint64_t>(i)).squaredNorm();
  });
  std::vector<double> out;
  for (double alpha : config.alphas) {
    const ObservationVector origin(Eigen::VectorXd::Zero(config.k));
    const double threshold = credible_region(alpha, origin, law).threshold();
    const auto covered =
        std::count_if(squared_norms.begin(), squared_norms.end(), [threshold](double d) { return d <= threshold; });
    out.push_back(static_cast<double>(covered) / config.reps);
  }
  return out;
}

/// Full report: r-value distribution, Bonferroni FWER and coverage.
inline CalibrationReport calibrate(const SimulationConfig& config) {
  CalibrationReport report = pairwise_r_distribution(config);
  report.fwer_bonferroni = bonferroni_fwer(config);
  report.coverage = coverage_check(config);
  return report;
}

// ---------------------------------------------------------------------------
// Brute-force triple oracle
// ---------------------------------------------------------------------------

using OracleQuery = std::variant<LinearHypothesis, BallRegion, RectRegion>;

/// A squared radius drawn from the law by summing squared normals.
inline double sample_squared_radius(const RadiusSquaredLaw& law, CounterStream& stream) {
  const double u = stream.chi_squared(law.dimension());
  if (law.family() == RadiusFamily::scaled_chi_squared) return law.scale() * u;
  return u / stream.chi_squared(law.nu());
}

namespace detail {

enum class SphereRelation { inside, outside, straddles };

// Classifies a sphere of radius rho around y against the query set.
class SphereClassifier {
 public:
  SphereClassifier(const OracleQuery& query, const ObservationVector& y) {
    std::visit([&](const auto& q) { prepare(q, y); }, query);
  }

  [[nodiscard]] SphereRelation classify(double rho2) const {
    const double rho = std::sqrt(rho2);
    switch (kind_) {
      case Kind::always_inside:
        return SphereRelation::inside;
      case Kind::always_outside:
        return SphereRelation::outside;
      case Kind::affine:
        return rho2 < t_y_ ? SphereRelation::outside : SphereRelation::straddles;
      case Kind::halfspace:
        if (rho <= signed_gap_) return SphereRelation::inside;
        if (rho < -signed_gap_) return SphereRelation::outside;
        return SphereRelation::straddles;
      case Kind::convex:
        if (rho <= inner_) return SphereRelation::inside;
        if (rho < nearest_ || rho > farthest_) return SphereRelation::outside;
        return SphereRelation::straddles;
    }
    return SphereRelation::straddles;
  }

 private:
  enum class Kind { always_inside, always_outside, affine, halfspace, convex };

  void prepare(const LinearHypothesis& h, const ObservationVector& y) {
    if (h.side() == Side::equality) {
      const SphereStatistic stat = t_statistic(h, y);
      if (!stat.consistent) {
        kind_ = Kind::always_outside;
      } else if (stat.rank == 0) {
        kind_ = Kind::always_inside;
      } else {
        kind_ = Kind::affine;
        t_y_ = stat.t_y;
      }
      return;
    }
    if (h.rows() != 1) throw UnsupportedHypothesis("mc_triple_oracle: multi-constraint one-sided unsupported");
    if (h.columns() != y.dimension()) throw DimensionMismatch("mc_triple_oracle: dimension mismatch");
    const Eigen::VectorXd c = h.contrast().row(0).transpose();
    const double a = h.rhs()[0];
    if (c.squaredNorm() == 0.0) {
      kind_ = a >= 0.0 ? Kind::always_inside : Kind::always_outside;
      return;
    }
    kind_ = Kind::halfspace;
    signed_gap_ = (a - c.dot(y.values())) / c.norm();
  }

  // sphere inside the ball iff |y - c| + rho <= R; disjoint iff rho lies
  // outside [dist(y, ball), |y - c| + R]
  void prepare(const BallRegion& ball, const ObservationVector& y) {
    if (ball.center().dimension() != y.dimension()) throw DimensionMismatch("mc_triple_oracle: dimension mismatch");
    const double offset = (y.values() - ball.center().values()).norm();
    const double radius = std::sqrt(ball.threshold());
    kind_ = Kind::convex;
    inner_ = radius - offset;
    nearest_ = std::max(offset - radius, 0.0);
    farthest_ = offset + radius;
  }

  // sphere inside the cube iff max_i |y_i - c_i| + rho <= h; disjoint iff rho
  // lies outside [dist(y, cube), farthest corner distance]
  void prepare(const RectRegion& rect, const ObservationVector& y) {
    if (rect.center().dimension() != y.dimension()) throw DimensionMismatch("mc_triple_oracle: dimension mismatch");
    const Eigen::ArrayXd offset = (y.values() - rect.center().values()).array().abs();
    const double h = rect.halfwidth();
    kind_ = Kind::convex;
    inner_ = h - offset.maxCoeff();
    nearest_ = (offset - h).max(0.0).matrix().norm();
    farthest_ = (offset + h).matrix().norm();
  }

  Kind kind_ = Kind::always_outside;
  double t_y_ = 0.0;
  double signed_gap_ = 0.0;
  double inner_ = 0.0;
  double nearest_ = 0.0;
  double farthest_ = 0.0;
};

}  // namespace detail

/// Empirical (p, q, r) from n sampled spheres; draw i uses substream i.
inline PosteriorTriple mc_triple_oracle(const OracleQuery& query, const ObservationVector& y,
                                        const RadiusSquaredLaw& law, int n, std::uint64_t seed) {
  detail::require(n >= 1, "mc_triple_oracle: n must be >= 1");
  detail::require_law_dimension(law, y, "mc_triple_oracle");
  const detail::SphereClassifier classifier(query, y);
  long inside = 0;
  long outside = 0;
  for (int i = 0; i < n; ++i) {
    CounterStream stream(seed, static_cast<std::uint64_t>(i));
    switch (classifier.classify(sample_squared_radius(law, stream))) {
      case detail::SphereRelation::inside:
        ++inside;
        break;
      case detail::SphereRelation::outside:
        ++outside;
        break;
      case detail::SphereRelation::straddles:
        break;
    }
  }
  const double p = static_cast<double>(inside) / n;
  const double q = static_cast<double>(outside) / n;
  return {p, q, static_cast<double>(n - inside - outside) / n};
}

/// Posterior intervals (U1, U2] of the two-toss coin example, drawn by
/// rejection sampling of uniform pairs with U1 < U2.
inline std::vector<std::pair<double, double>> bernoulli_interval_draws(int n, std::uint64_t seed) {
  detail::require(n >= 1, "bernoulli_interval_draws: n must be >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CounterStream stream(seed, static_cast<std::uint64_t>(i));
    for (;;) {
      const double u1 = stream.uniform();
      const double u2 = stream.uniform();
      if (u1 < u2) {
        out.emplace_back(u1, u2);
        break;
      }
    }
  }
  return out;
}

}  // namespace vacuous
