#pragma once

// Half-width and Bonferroni-rectangle comparison tables.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "vacuous/inference.hpp"
#include "vacuous/model.hpp"

namespace vacuous {

inline const std::vector<int> table_dimensions{1, 2, 5, 10, 100};

struct HalfWidthRow {
  int k;
  double upper_calibrated;  ///< standardized width with q = alpha
  double bonferroni;
  double lower_calibrated;  ///< standardized width with p = 1 - alpha
};

struct BonferroniRectRow {
  int k;
  double alpha;
  PosteriorTriple triple;
};

inline std::vector<HalfWidthRow> halfwidth_table(double alpha = 0.05,
                                                 const std::vector<int>& dimensions = table_dimensions) {
  std::vector<HalfWidthRow> rows;
  for (int k : dimensions) {
    const auto law = RadiusSquaredLaw::scaled_chi_squared(k, 1.0);
    rows.push_back({k, upper_calibrated_halfwidth(alpha, law), bonferroni_halfwidth(alpha, k),
                    lower_calibrated_halfwidth(alpha, law)});
  }
  return rows;
}

/// (p, q, r) of the y-centred Bonferroni (1 - alpha) cube with s = 1, for
/// each alpha and each dimension.
inline std::vector<BonferroniRectRow> bonferroni_rect_table(const std::vector<double>& alphas = {0.05, 0.2},
                                                            const std::vector<int>& dimensions = table_dimensions) {
  std::vector<BonferroniRectRow> rows;
  for (double alpha : alphas) {
    for (int k : dimensions) {
      const ObservationVector y(Eigen::VectorXd::Zero(k));
      const auto law = RadiusSquaredLaw::scaled_chi_squared(k, 1.0);
      const RectRegion cube(y, bonferroni_halfwidth(alpha, k));
      rows.push_back({k, alpha, rect_triple(cube, y, law)});
    }
  }
  return rows;
}

/// Rounds half away from zero to `decimals` places.
inline double round_half_away(double x, int decimals) {
  const double factor = std::pow(10.0, decimals);
  return std::round(x * factor) / factor;
}

inline std::string format_2dp(double x) {
  char buffer[64];
  double rounded = round_half_away(x, 2);
  if (rounded == 0.0) rounded = 0.0;  // no "-0.00"
  std::snprintf(buffer, sizeof buffer, "%.2f", rounded);
  return buffer;
}

/// Text rendering of table 1 (half widths) or 2 (Bonferroni cubes).
inline std::string render_table(int which) {
  detail::require(which == 1 || which == 2, "render_table: table must be 1 or 2");
  std::string out;
  char alpha_text[32];
  if (which == 1) {
    out += "# alpha=0.05: upper_calibrated bonferroni lower_calibrated\n";
    for (const auto& row : halfwidth_table()) {
      out += "k=" + std::to_string(row.k) + ": " + format_2dp(row.upper_calibrated) + " " +
             format_2dp(row.bonferroni) + " " + format_2dp(row.lower_calibrated) + "\n";
    }
    return out;
  }
  out += "# bonferroni cube: p q r\n";
  for (const auto& row : bonferroni_rect_table()) {
    std::snprintf(alpha_text, sizeof alpha_text, "%g", row.alpha);
    out += "k=" + std::to_string(row.k) + ", \xCE\xB1=" + alpha_text + ": " + format_2dp(row.triple.p()) + " " +
           format_2dp(row.triple.q()) + " " + format_2dp(row.triple.r()) + "\n";
  }
  return out;
}

}  // namespace vacuous
