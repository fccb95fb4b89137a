#pragma once

// Special functions behind every radius law: regularized incomplete gamma and
// beta, chi-squared and F distribution functions with their quantiles, and
// the standard normal CDF/quantile. Degrees of freedom are integers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace vacuous::specfun {

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double tiny = 1e-300;
inline constexpr int max_iterations = 10000;

inline void require(bool condition, const char* function, const std::string& what) {
  if (!condition) {
    throw std::invalid_argument(std::string(function) + ": " + what);
  }
}

inline void require_dof(int dof, const char* function) {
  require(dof >= 1, function, "degrees of freedom must be >= 1, got " + std::to_string(dof));
}

inline void require_nonnegative(double x, const char* function) {
  require(std::isfinite(x), function, "argument must be finite");
  require(x >= 0.0, function, "argument must be >= 0");
}

inline void require_lower_probability(double p, const char* function) {
  require(std::isfinite(p) && p >= 0.0 && p < 1.0, function, "probability must lie in [0, 1)");
}

// log of the common prefactor x^a e^-x / Gamma(a)
inline double log_gamma_prefactor(double a, double x) {
  return -x + a * std::log(x) - std::lgamma(a);
}

// P(a, x) by power series. Converges fast for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < max_iterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * eps) {
      return sum * std::exp(log_gamma_prefactor(a, x));
    }
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

// Q(a, x) by modified Lentz evaluation of the Legendre continued fraction.
// Used for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_iterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) {
      return std::exp(log_gamma_prefactor(a, x)) * h;
    }
  }
  throw std::runtime_error("gamma_q_continued_fraction: no convergence");
}

// Continued fraction for I_x(a, b); x is the argument and y = 1 - x supplied
// separately so callers can keep precision near x = 1.
inline double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < max_iterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) return h;
  }
  throw std::runtime_error("beta_continued_fraction: no convergence");
}

// lgamma(z) - ((z - 1/2) log z - z + log(2 pi) / 2), for z >= 10.
inline double stirling_remainder(double z) {
  const double r = 1.0 / (z * z);
  return (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r / 1680.0))) / z;
}

inline constexpr double stirling_cutoff = 10.0;

// log(x^a y^b / B(a, b)) with y = 1 - x. For large shapes the lgamma
// differences cancel badly, so the large parts are folded into log1p terms.
inline double log_beta_prefactor(double a, double b, double x, double y) {
  if (a < b) std::swap(a, b), std::swap(x, y);
  if (a < stirling_cutoff) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  }
  const double s = a + b;
  const double gap = x * b - y * a;  // x s - a
  const double delta = stirling_remainder(s) - stirling_remainder(a);
  if (b < stirling_cutoff) {
    return a * std::log1p(gap / a) - 0.5 * std::log1p(b / a) + b * std::log(y * s) - b - std::lgamma(b) + delta;
  }
  return a * std::log1p(gap / a) + b * std::log1p(-gap / b) + 0.5 * std::log(a * b / s) -
         0.5 * std::log(2.0 * std::numbers::pi) + delta - stirling_remainder(b);
}

// I_x(a, b) with y = 1 - x. The fraction is evaluated on whichever side of
// the mean (a + 1) / (a + b + 2) converges.
inline double regularized_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = log_beta_prefactor(a, b, x, y);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

// Bracketed Newton iteration on a CDF. Newton steps that leave the bracket
// fall back to bisection.
template <class Cdf, class Pdf>
double invert_cdf(const Cdf& cdf, const Pdf& pdf, double p, double guess, const char* function) {
  double lo = 0.0;
  double hi = std::max(guess, 1.0);
  for (int i = 0; cdf(hi) < p; ++i) {
    if (i > 2000) throw std::runtime_error(std::string(function) + ": cannot bracket quantile");
    lo = hi;
    hi *= 2.0;
  }
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int i = 0; i < 4000; ++i) {
    const double f = cdf(x) - p;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = pdf(x);
    double next = (density > 0.0 && std::isfinite(density)) ? x - f / density : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 2.0 * eps * std::fabs(next) || hi - lo <= 2.0 * eps * hi) {
      return next;
    }
    x = next;
  }
  if (std::fabs(cdf(x) - p) <= 1e-12) return x;
  throw std::runtime_error(std::string(function) + ": quantile iteration did not converge");
}

}  // namespace detail

/// Lower regularized incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
  detail::require(a > 0.0 && std::isfinite(a), "regularized_gamma_p", "shape must be positive");
  detail::require_nonnegative(x, "regularized_gamma_p");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_continued_fraction(a, x);
}

/// Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x).
inline double regularized_gamma_q(double a, double x) {
  detail::require(a > 0.0 && std::isfinite(a), "regularized_gamma_q", "shape must be positive");
  detail::require_nonnegative(x, "regularized_gamma_q");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

/// Regularized incomplete beta I_x(a, b) for x in [0, 1].
inline double regularized_beta(double a, double b, double x) {
  detail::require(a > 0.0 && b > 0.0, "regularized_beta", "shapes must be positive");
  detail::require(std::isfinite(x) && x >= 0.0 && x <= 1.0, "regularized_beta",
                  "argument must lie in [0, 1]");
  return detail::regularized_beta(a, b, x, 1.0 - x);
}

// ---------------------------------------------------------------------------
// Chi-squared
// ---------------------------------------------------------------------------

inline double chi2_cdf(int k, double x) {
  detail::require_dof(k, "chi2_cdf");
  detail::require_nonnegative(x, "chi2_cdf");
  return regularized_gamma_p(0.5 * k, 0.5 * x);
}

/// Survival function 1 - chi2_cdf, evaluated without cancellation.
inline double chi2_sf(int k, double x) {
  detail::require_dof(k, "chi2_sf");
  detail::require_nonnegative(x, "chi2_sf");
  return regularized_gamma_q(0.5 * k, 0.5 * x);
}

inline double chi2_pdf(int k, double x) {
  detail::require_dof(k, "chi2_pdf");
  detail::require_nonnegative(x, "chi2_pdf");
  const double half = 0.5 * k;
  if (x == 0.0) {
    if (k == 1) return std::numeric_limits<double>::infinity();
    return k == 2 ? 0.5 : 0.0;
  }
  return std::exp((half - 1.0) * std::log(x) - 0.5 * x - half * std::numbers::ln2 - std::lgamma(half));
}

inline double normal_quantile(double p);

inline double chi2_quantile(int k, double p) {
  detail::require_dof(k, "chi2_quantile");
  detail::require_lower_probability(p, "chi2_quantile");
  if (p == 0.0) return 0.0;
  // Wilson-Hilferty starting point
  double guess = 1.0;
  if (p > 1e-8) {
    const double v = 2.0 / (9.0 * k);
    const double cube = 1.0 - v + normal_quantile(p) * std::sqrt(v);
    if (cube > 0.0) guess = k * cube * cube * cube;
  }
  return detail::invert_cdf([k](double x) { return chi2_cdf(k, x); },
                            [k](double x) { return chi2_pdf(k, x); }, p, guess, "chi2_quantile");
}

// ---------------------------------------------------------------------------
// Snedecor F
// ---------------------------------------------------------------------------

inline double f_cdf(int d1, int d2, double x) {
  detail::require_dof(d1, "f_cdf");
  detail::require_dof(d2, "f_cdf");
  detail::require_nonnegative(x, "f_cdf");
  if (x == 0.0) return 0.0;
  const double denom = d1 * x + d2;
  return detail::regularized_beta(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom);
}

inline double f_sf(int d1, int d2, double x) {
  detail::require_dof(d1, "f_sf");
  detail::require_dof(d2, "f_sf");
  detail::require_nonnegative(x, "f_sf");
  if (x == 0.0) return 1.0;
  const double denom = d1 * x + d2;
  return detail::regularized_beta(0.5 * d2, 0.5 * d1, d2 / denom, d1 * x / denom);
}

inline double f_pdf(int d1, int d2, double x) {
  detail::require_dof(d1, "f_pdf");
  detail::require_dof(d2, "f_pdf");
  detail::require_nonnegative(x, "f_pdf");
  const double a = 0.5 * d1;
  const double b = 0.5 * d2;
  if (x == 0.0) {
    if (d1 == 1) return std::numeric_limits<double>::infinity();
    return d1 == 2 ? 1.0 : 0.0;
  }
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp(a * std::log(static_cast<double>(d1)) + b * std::log(static_cast<double>(d2)) +
                  (a - 1.0) * std::log(x) - (a + b) * std::log(d1 * x + d2) - log_beta);
}

inline double f_quantile(int d1, int d2, double p) {
  detail::require_dof(d1, "f_quantile");
  detail::require_dof(d2, "f_quantile");
  detail::require_lower_probability(p, "f_quantile");
  if (p == 0.0) return 0.0;
  return detail::invert_cdf([=](double x) { return f_cdf(d1, d2, x); },
                            [=](double x) { return f_pdf(d1, d2, x); }, p, 1.0, "f_quantile");
}

// ---------------------------------------------------------------------------
// Standard normal
// ---------------------------------------------------------------------------

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace detail {

// Lower-tail quantile for 0 < p <= 0.5: Acklam's rational approximation
// (relative error ~1.2e-9) followed by one Halley step on erfc.
inline double normal_lower_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

/// Standard normal quantile; exactly antisymmetric about p = 0.5.
inline double normal_quantile(double p) {
  detail::require(std::isfinite(p) && p > 0.0 && p < 1.0, "normal_quantile",
                  "probability must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return detail::normal_lower_quantile(p);
  return -detail::normal_lower_quantile(1.0 - p);
}

}  // namespace vacuous::specfun
