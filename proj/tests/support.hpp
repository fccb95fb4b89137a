#pragma once

// Test-only reference routines. Nothing here calls into the code paths it is
// used to check.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vacuous/vacuous.hpp"

namespace vacuous::testing {

/// Composite Simpson rule on [lo, hi] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// F(d1, d2) density written out from its textbook form.
inline double f_density(int d1, int d2, double x) {
  if (x <= 0.0) return d1 == 2 ? 1.0 : 0.0;
  const double a = 0.5 * d1;
  const double b = 0.5 * d2;
  const double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return std::pow(d1 * x / (d1 * x + d2), a) * std::pow(d2 / (d1 * x + d2), b) / (x * beta);
}

/// Squared distance from y to {M : C M = a} via a complete orthogonal
/// decomposition: the minimum-norm correction d with C d = a - C y.
inline double affine_distance_squared(const Eigen::MatrixXd& contrast, const Eigen::VectorXd& rhs,
                                      const Eigen::VectorXd& y) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(contrast);
  const Eigen::VectorXd correction = cod.solve(rhs - contrast * y);
  return correction.squaredNorm();
}

inline double centred_sum_of_squares(const Eigen::VectorXd& y) {
  return (y.array() - y.mean()).square().sum();
}

struct BatteryCase {
  std::string name;
  OracleQuery query;
  ObservationVector y;
  RadiusSquaredLaw law;
};

inline PosteriorTriple closed_form(const BatteryCase& c) {
  return std::visit(
      [&](const auto& q) -> PosteriorTriple {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, LinearHypothesis>) {
          return linear_triple(q, c.y, c.law);
        } else if constexpr (std::is_same_v<T, BallRegion>) {
          return ball_triple(q, c.y, c.law);
        } else {
          return rect_triple(q, c.y, c.law);
        }
      },
      c.query);
}

inline Eigen::MatrixXd matrix(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Eigen::VectorXd vector(std::initializer_list<double> values) {
  return ObservationVector(values).values();
}

/// Twenty fixed queries: equalities, single inequalities, balls and cubes,
/// k <= 5, both radius laws.
inline std::vector<BatteryCase> oracle_battery() {
  using Law = RadiusSquaredLaw;
  std::vector<BatteryCase> cases;
  const auto add_linear = [&](std::string name, Eigen::MatrixXd c, Eigen::VectorXd a, Side side, ObservationVector y,
                              Law law) {
    cases.push_back({std::move(name), LinearHypothesis(std::move(c), std::move(a), side), std::move(y), law});
  };

  add_linear("all means zero k=2", Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), Side::equality,
             {1.0, 1.0}, Law::scaled_chi_squared(2, 1.0));
  add_linear("all means fixed k=3", Eigen::MatrixXd::Identity(3, 3), vector({0.5, 0.0, -0.5}), Side::equality,
             {1.0, -0.4, 0.2}, Law::scaled_chi_squared(3, 0.5));
  add_linear("first mean zero k=4", matrix({{1, 0, 0, 0}}), vector({0.0}), Side::equality, {0.8, 0.1, -1.2, 0.4},
             Law::scaled_chi_squared(4, 1.0));
  add_linear("pairwise k=3", pairwise_contrast_matrix(3), Eigen::VectorXd::Zero(3), Side::equality, {1.0, 2.0, 3.0},
             Law::scaled_chi_squared(3, 1.0));
  add_linear("pairwise k=5 F", pairwise_contrast_matrix(5), Eigen::VectorXd::Zero(10), Side::equality,
             {0.3, -0.2, 1.1, 0.4, -0.9}, Law::scaled_f(5, 8));
  add_linear("sum constraint F", matrix({{1, 1, 0}}), vector({1.0}), Side::equality, {0.2, 0.1, 0.5},
             Law::scaled_f(3, 5));
  add_linear("rank-deficient consistent", matrix({{1, -1}, {-1, 1}}), vector({0.5, -0.5}), Side::equality,
             {1.0, 0.2}, Law::scaled_chi_squared(2, 2.0));
  add_linear("inconsistent", matrix({{1, -1}, {-1, 1}}), vector({1.0, 0.0}), Side::equality, {0.0, 0.0},
             Law::scaled_chi_squared(2, 1.0));
  add_linear("one-sided supported", matrix({{1, 0}}), vector({0.0}), Side::less_equal, {-1.0, 0.3},
             Law::scaled_chi_squared(2, 1.0));
  add_linear("one-sided contradicted", matrix({{1, 0}}), vector({0.0}), Side::less_equal, {1.0, 0.3},
             Law::scaled_chi_squared(2, 1.0));
  add_linear("one-sided oblique F", matrix({{1, 2, -1}}), vector({0.5}), Side::less_equal, {-0.5, 0.2, 0.3},
             Law::scaled_f(3, 4));
  add_linear("one-sided last mean F", matrix({{0, 0, 0, 1}}), vector({1.2}), Side::less_equal, {0.0, 0.0, 0.0, 2.0},
             Law::scaled_f(4, 10));
  add_linear("one-sided total k=5", matrix({{1, 1, 1, 1, 1}}), vector({0.0}), Side::less_equal,
             {0.1, -0.3, 0.2, -0.6, 0.1}, Law::scaled_chi_squared(5, 0.7));

  {
    const ObservationVector y{0.4, -1.0};
    const auto law = Law::scaled_chi_squared(2, 1.0);
    cases.push_back({"credible ball 0.95 k=2", credible_region(0.05, y, law), y, law});
  }
  {
    const ObservationVector y{1.0, 2.0, -0.5};
    const auto law = Law::scaled_f(3, 6);
    cases.push_back({"credible ball 0.5 k=3 F", credible_region(0.5, y, law), y, law});
  }
  {
    const ObservationVector y{0.0, 0.1, 0.2, 0.3, 0.4};
    const auto law = Law::scaled_chi_squared(5, 1.5);
    cases.push_back({"median ball k=5", BallRegion(y, law_quantile(law, 0.5)), y, law});
  }
  {
    const ObservationVector y{0.0, 0.0};
    cases.push_back({"Bonferroni cube 0.05 k=2", RectRegion(y, bonferroni_halfwidth(0.05, 2)), y,
                     Law::scaled_chi_squared(2, 1.0)});
  }
  {
    const ObservationVector y{0.1, 0.2, 0.3, 0.4, 0.5};
    cases.push_back({"Bonferroni cube 0.2 k=5", RectRegion(y, bonferroni_halfwidth(0.2, 5)), y,
                     Law::scaled_chi_squared(5, 1.0)});
  }
  {
    const ObservationVector y{1.0, -1.0, 0.5};
    cases.push_back({"unit cube k=3 F", RectRegion(y, 1.0), y, Law::scaled_f(3, 5)});
  }
  {
    const ObservationVector y{0.0, 1.0, 2.0, 3.0};
    cases.push_back({"cube 0.7 k=4 F", RectRegion(y, 0.7), y, Law::scaled_f(4, 12)});
  }
  return cases;
}

inline constexpr std::uint64_t battery_seed = 20190611;

}  // namespace vacuous::testing
