#pragma once

// Contrast-matrix linear algebra: pseudoinverses of Gram matrices, rank and
// consistency checks, and the squared distance t_y from the sphere centre y
// to the affine set {M : C M = a}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "vacuous/error.hpp"
#include "vacuous/model.hpp"

namespace vacuous {

enum class Side { equality, less_equal };

/// H: C M = a (equality) or C M <= a componentwise (less_equal).
class LinearHypothesis {
 public:
  LinearHypothesis(Eigen::MatrixXd contrast, Eigen::VectorXd rhs, Side side = Side::equality)
      : contrast_(std::move(contrast)), rhs_(std::move(rhs)), side_(side) {
    detail::require(contrast_.rows() >= 1 && contrast_.cols() >= 1,
                    "LinearHypothesis: contrast matrix must be non-empty");
    if (contrast_.rows() != rhs_.size()) {
      throw DimensionMismatch("LinearHypothesis: contrast has " + std::to_string(contrast_.rows()) +
                              " rows but right-hand side has length " + std::to_string(rhs_.size()));
    }
    detail::require(contrast_.allFinite() && rhs_.allFinite(), "LinearHypothesis: entries must be finite");
  }

  [[nodiscard]] const Eigen::MatrixXd& contrast() const { return contrast_; }
  [[nodiscard]] const Eigen::VectorXd& rhs() const { return rhs_; }
  [[nodiscard]] Side side() const { return side_; }
  [[nodiscard]] Eigen::Index rows() const { return contrast_.rows(); }
  [[nodiscard]] Eigen::Index columns() const { return contrast_.cols(); }

 private:
  Eigen::MatrixXd contrast_;
  Eigen::VectorXd rhs_;
  Side side_;
};

struct SphereStatistic {
  double t_y = 0.0;  ///< squared data units
  bool consistent = true;
  Eigen::Index rank = 0;  ///< numerical rank of C
};

inline constexpr double symmetry_tolerance = 1e-10;
inline constexpr double consistency_tolerance = 1e-9;

namespace detail {

struct SymmetricSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  double cutoff;
};

// Eigendecomposition of a symmetric PSD matrix with the rank cutoff
// max_dim * eps * lambda_max. Rejects asymmetric or indefinite input.
inline SymmetricSpectrum psd_spectrum(const Eigen::MatrixXd& gram, Eigen::Index max_dim) {
  detail::require(gram.rows() == gram.cols(), "psd_pseudoinverse: matrix must be square");
  detail::require(gram.allFinite(), "psd_pseudoinverse: entries must be finite");
  const double norm = gram.cwiseAbs().maxCoeff();
  const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  detail::require(asym <= symmetry_tolerance * norm, "psd_pseudoinverse: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw std::runtime_error("psd_pseudoinverse: eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double largest = values.size() > 0 ? std::max(values.maxCoeff(), 0.0) : 0.0;
  detail::require(values.size() == 0 || values.minCoeff() >= -symmetry_tolerance * norm,
                  "psd_pseudoinverse: matrix is not positive semidefinite");
  const double dim = static_cast<double>(std::max(max_dim, gram.rows()));
  return {values, solver.eigenvectors(), dim * std::numeric_limits<double>::epsilon() * largest};
}

inline Eigen::MatrixXd pseudoinverse_from(const SymmetricSpectrum& spectrum) {
  const Eigen::Index n = spectrum.values.size();
  Eigen::VectorXd inverted = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (spectrum.values[i] > spectrum.cutoff) inverted[i] = 1.0 / spectrum.values[i];
  }
  return spectrum.vectors * inverted.asDiagonal() * spectrum.vectors.transpose();
}

inline Eigen::Index rank_from(const SymmetricSpectrum& spectrum) {
  return (spectrum.values.array() > spectrum.cutoff).count();
}

// Moore-Penrose pseudoinverse of C through the smaller of CC' and C'C:
// C+ = C'(CC')+ when p <= k, otherwise (C'C)+ C'.
struct ContrastPseudoinverse {
  Eigen::MatrixXd pinv;  // k x p
  Eigen::Index rank;
};

inline ContrastPseudoinverse contrast_pseudoinverse(const Eigen::MatrixXd& contrast) {
  const Eigen::Index p = contrast.rows();
  const Eigen::Index k = contrast.cols();
  const Eigen::Index max_dim = std::max(p, k);
  if (p <= k) {
    const Eigen::MatrixXd gram = contrast * contrast.transpose();
    const auto spectrum = psd_spectrum(gram, max_dim);
    return {contrast.transpose() * pseudoinverse_from(spectrum), rank_from(spectrum)};
  }
  const Eigen::MatrixXd gram = contrast.transpose() * contrast;
  const auto spectrum = psd_spectrum(gram, max_dim);
  return {pseudoinverse_from(spectrum) * contrast.transpose(), rank_from(spectrum)};
}

inline bool consistent_with(const Eigen::MatrixXd& contrast, const Eigen::MatrixXd& pinv,
                            const Eigen::VectorXd& rhs) {
  const Eigen::VectorXd residual = contrast * (pinv * rhs) - rhs;
  return residual.norm() <= consistency_tolerance * (1.0 + rhs.norm());
}

}  // namespace detail

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix. Eigenvalues below
/// max(n, max_dim) * eps * lambda_max are treated as zero.
inline Eigen::MatrixXd psd_pseudoinverse(const Eigen::MatrixXd& gram, Eigen::Index max_dim = 0) {
  return detail::pseudoinverse_from(detail::psd_spectrum(gram, max_dim));
}

/// Numerical rank of an arbitrary matrix, using the pseudoinverse cutoff.
inline Eigen::Index numerical_rank(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return 0;
  const Eigen::Index max_dim = std::max(matrix.rows(), matrix.cols());
  const Eigen::MatrixXd gram = matrix.rows() <= matrix.cols() ? Eigen::MatrixXd(matrix * matrix.transpose())
                                                              : Eigen::MatrixXd(matrix.transpose() * matrix);
  return detail::rank_from(detail::psd_spectrum(gram, max_dim));
}

/// One row per pair i < j in lexicographic order: +1 at i, -1 at j.
inline Eigen::MatrixXd pairwise_contrast_matrix(int k) {
  detail::require(k >= 2, "pairwise_contrast_matrix: k must be >= 2");
  Eigen::MatrixXd contrast = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k) * (k - 1) / 2, k);
  Eigen::Index row = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j, ++row) {
      contrast(row, i) = 1.0;
      contrast(row, j) = -1.0;
    }
  }
  return contrast;
}

/// True iff a lies in the column space of C: |C C+ a - a| <= tol (1 + |a|).
inline bool is_consistent(const Eigen::MatrixXd& contrast, const Eigen::VectorXd& rhs) {
  if (contrast.rows() != rhs.size()) {
    throw DimensionMismatch("is_consistent: contrast has " + std::to_string(contrast.rows()) +
                            " rows but right-hand side has length " + std::to_string(rhs.size()));
  }
  return detail::consistent_with(contrast, detail::contrast_pseudoinverse(contrast).pinv, rhs);
}

/// t_y = (a - Cy)' (CC')+ (a - Cy).
///
/// For consistent systems this is the squared distance from y to {M : CM = a}.
/// Inconsistent systems are not an error here; the least-squares value is
/// returned with consistent = false.
inline SphereStatistic t_statistic(const LinearHypothesis& hypothesis, const ObservationVector& y) {
  const Eigen::MatrixXd& contrast = hypothesis.contrast();
  if (contrast.cols() != y.dimension()) {
    throw DimensionMismatch("t_statistic: contrast has " + std::to_string(contrast.cols()) +
                            " columns but observation has dimension " + std::to_string(y.dimension()));
  }
  const Eigen::Index p = contrast.rows();
  const Eigen::Index k = contrast.cols();
  const Eigen::VectorXd gap = hypothesis.rhs() - contrast * y.values();

  SphereStatistic result;
  Eigen::MatrixXd pinv;
  if (p <= k) {
    const auto spectrum = detail::psd_spectrum(contrast * contrast.transpose(), std::max(p, k));
    const Eigen::MatrixXd gram_pinv = detail::pseudoinverse_from(spectrum);
    result.t_y = gap.dot(gram_pinv * gap);
    result.rank = detail::rank_from(spectrum);
    pinv = contrast.transpose() * gram_pinv;
  } else {
    // lift through C'C: (CC')+ = C (C'C)+ (C'C)+ C'
    const auto spectrum = detail::psd_spectrum(contrast.transpose() * contrast, std::max(p, k));
    const Eigen::MatrixXd gram_pinv = detail::pseudoinverse_from(spectrum);
    const Eigen::VectorXd lifted = gram_pinv * (contrast.transpose() * gap);
    result.t_y = lifted.squaredNorm();
    result.rank = detail::rank_from(spectrum);
    pinv = gram_pinv * contrast.transpose();
  }
  result.t_y = std::max(result.t_y, 0.0);
  result.consistent = detail::consistent_with(contrast, pinv, hypothesis.rhs());
  return result;
}

/// A hypothesis prepared for repeated evaluation of t_y against many
/// observations. With P = C+C (projector onto the row space of C) and
/// m0 = C+a, t_y = |P (y - m0)|^2, which equals the Gram form for both
/// consistent and inconsistent systems.
class ProjectedHypothesis {
 public:
  explicit ProjectedHypothesis(const LinearHypothesis& hypothesis) : columns_(hypothesis.columns()) {
    const auto pinv = detail::contrast_pseudoinverse(hypothesis.contrast());
    projector_ = pinv.pinv * hypothesis.contrast();
    anchor_ = pinv.pinv * hypothesis.rhs();
    rank_ = pinv.rank;
    consistent_ = detail::consistent_with(hypothesis.contrast(), pinv.pinv, hypothesis.rhs());
  }

  [[nodiscard]] double t_statistic(const Eigen::VectorXd& y) const {
    if (y.size() != columns_) {
      throw DimensionMismatch("ProjectedHypothesis: observation has dimension " + std::to_string(y.size()) +
                              ", expected " + std::to_string(columns_));
    }
    return (projector_ * (y - anchor_)).squaredNorm();
  }

  [[nodiscard]] SphereStatistic evaluate(const ObservationVector& y) const {
    return {t_statistic(y.values()), consistent_, rank_};
  }

  [[nodiscard]] bool consistent() const { return consistent_; }
  [[nodiscard]] Eigen::Index rank() const { return rank_; }

 private:
  Eigen::Index columns_;
  Eigen::MatrixXd projector_;
  Eigen::VectorXd anchor_;
  Eigen::Index rank_ = 0;
  bool consistent_ = true;
};

}  // namespace vacuous
