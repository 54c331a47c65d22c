#pragma once

// Frechet distance between Gaussians fitted to two feature sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "s2rgap/error.hpp"

namespace s2r {

/// n x d feature matrix, one sample per row.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (cols_ == 0) fail(Errc::shape, "feature dimension must be >= 1");
    if (data_.size() != rows_ * cols_) fail(Errc::shape, "feature data length does not match rows x cols");
    if (rows_ < 2) {
      fail(Errc::insufficient_samples,
           "covariance needs at least 2 samples, got " + std::to_string(rows_));
    }
    for (double v : data_) {
      if (!std::isfinite(v)) fail(Errc::parameter, "feature matrix contains a non-finite value");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Column means and the unbiased (n - 1) sample covariance, symmetrized.
inline GaussianStats estimate_stats(const FeatureMatrix& f) {
  const auto x = f.matrix();
  GaussianStats stats;
  stats.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - stats.mean.transpose();
  const Eigen::MatrixXd c = (centered.transpose() * centered) / static_cast<double>(f.rows() - 1);
  stats.cov = (c + c.transpose()) * 0.5;
  return stats;
}

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kNegativeEigenTolerance = 1e-6;

/// Principal square root of a symmetric PSD matrix via eigendecomposition.
/// Eigenvalues in [-1e-6 * |m|, 0) are clamped to zero; anything below fails.
inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(Errc::shape, "matrix_sqrt_psd needs a square matrix");
  const double norm = m.norm();
  if ((m - m.transpose()).norm() > kSymmetryTolerance * std::max(norm, 1e-300)) {
    fail(Errc::shape, "matrix_sqrt_psd input is not symmetric");
  }
  const Eigen::MatrixXd sym = (m + m.transpose()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) fail(Errc::not_psd, "eigendecomposition did not converge");

  Eigen::VectorXd values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -kNegativeEigenTolerance * scale) {
      fail(Errc::not_psd, "matrix has eigenvalue " + std::to_string(values[i]) +
                              " below tolerance for norm " + std::to_string(scale));
    }
    values[i] = std::sqrt(std::max(values[i], 0.0));
  }
  const auto& v = eig.eigenvectors();
  const Eigen::MatrixXd s = v * values.asDiagonal() * v.transpose();
  return (s + s.transpose()) * 0.5;
}

/// |mu_a - mu_b|^2 + Tr(S_a) + Tr(S_b) - 2 Tr((S_a S_b)^1/2).
///
/// The cross term uses Tr((S_a S_b)^1/2) = Tr((S_a^1/2 S_b S_a^1/2)^1/2) so
/// both roots are of symmetric PSD matrices.
inline double fid(const GaussianStats& a, const GaussianStats& b) {
  const auto d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || a.cov.cols() != d || b.cov.rows() != d ||
      b.cov.cols() != d) {
    fail(Errc::shape, "fid inputs have mismatched dimensions (" + std::to_string(a.mean.size()) +
                          " vs " + std::to_string(b.mean.size()) + ")");
  }
  const Eigen::MatrixXd root_a = matrix_sqrt_psd(a.cov);
  Eigen::MatrixXd inner = root_a * b.cov * root_a;
  inner = (inner + inner.transpose()) * 0.5;
  const double cross = matrix_sqrt_psd(inner).trace();

  double result = (a.mean - b.mean).squaredNorm() + a.cov.trace() + b.cov.trace() - 2.0 * cross;
  if (result < 0.0 && std::abs(result) < 1e-8) result = 0.0;
  return result;
}

}  // namespace s2r
