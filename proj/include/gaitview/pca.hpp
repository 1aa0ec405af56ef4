#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace gaitview {

/// Observations in rows, features in columns.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_labels;

  Eigen::Index rows() const noexcept { return values.rows(); }
  Eigen::Index cols() const noexcept { return values.cols(); }
  void validate() const;
};

struct PcaResult {
  std::size_t k = 0;
  double explained_ratio = 0.0;       // cumulative ratio of the first k components
  Eigen::MatrixXd basis;              // cols x k, orthonormal columns
  Eigen::VectorXd singular_values;    // all of them, nonincreasing
  Eigen::VectorXd variance_ratios;    // per component, sums to 1
  Eigen::VectorXd column_means;
};

/// Covariance PCA (centred, not scaled). Keeps the fewest components whose
/// cumulative explained variance reaches `threshold`. Each basis vector is
/// signed so that its largest-magnitude entry is positive.
PcaResult pca_fit(const FeatureMatrix& m, double threshold = 0.95);

/// Centred data projected onto the retained basis; columns pc1..pck.
FeatureMatrix pca_project(const FeatureMatrix& m, const PcaResult& fit);

/// Maps projected scores back to the original feature space.
Eigen::MatrixXd pca_reconstruct(const FeatureMatrix& scores, const PcaResult& fit);

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m);

}  // namespace gaitview
