#include "gaitview/pca.hpp"

#include "gaitview/error.hpp"
#include "gaitview/ingest.hpp"

#include <Eigen/SVD>

#include <ostream>

namespace gaitview {

void FeatureMatrix::validate() const {
  if (values.rows() < 2) fail(Errc::DegenerateMatrix, "need at least 2 observations");
  if (values.cols() < 1) fail(Errc::DegenerateMatrix, "need at least 1 feature");
  if (!values.allFinite()) fail(Errc::NonFiniteValue, "feature matrix contains non-finite entries");
  if (!column_labels.empty() && column_labels.size() != static_cast<std::size_t>(values.cols()))
    fail(Errc::DimensionMismatch, "column label count does not match the matrix");
}

PcaResult pca_fit(const FeatureMatrix& m, double threshold) {
  m.validate();
  if (!(threshold > 0.0 && threshold <= 1.0)) fail(Errc::InvalidArgument, "threshold must lie in (0, 1]");

  PcaResult fit;
  fit.column_means = m.values.colwise().mean().transpose();
  const Eigen::MatrixXd centred = m.values.rowwise() - fit.column_means.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  fit.singular_values = svd.singularValues();
  const Eigen::VectorXd variances = fit.singular_values.array().square();
  const double total = variances.sum();
  const double scale = centred.cwiseAbs().maxCoeff();
  if (!(total > 0.0) || fit.singular_values(0) <= 1e-12 * scale * std::sqrt(static_cast<double>(m.rows())))
    fail(Errc::DegenerateMatrix, "every column is constant");
  fit.variance_ratios = variances / total;

  const auto count = fit.variance_ratios.size();
  double cumulative = 0.0;
  Eigen::Index k = 0;
  while (k < count) {
    cumulative += fit.variance_ratios(k);
    ++k;
    if (cumulative >= threshold - 1e-12) break;
  }
  fit.k = static_cast<std::size_t>(k);
  fit.explained_ratio = std::min(1.0, cumulative);

  fit.basis = svd.matrixV().leftCols(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    fit.basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (fit.basis(arg, c) < 0.0) fit.basis.col(c) *= -1.0;
  }
  return fit;
}

FeatureMatrix pca_project(const FeatureMatrix& m, const PcaResult& fit) {
  if (m.cols() != fit.basis.rows())
    fail(Errc::DimensionMismatch, "matrix has " + std::to_string(m.cols()) + " columns, basis expects " +
                                      std::to_string(fit.basis.rows()));
  FeatureMatrix out;
  out.values = (m.values.rowwise() - fit.column_means.transpose()) * fit.basis;
  for (std::size_t c = 0; c < fit.k; ++c) out.column_labels.push_back("pc" + std::to_string(c + 1));
  return out;
}

Eigen::MatrixXd pca_reconstruct(const FeatureMatrix& scores, const PcaResult& fit) {
  if (scores.cols() != fit.basis.cols()) fail(Errc::DimensionMismatch, "score columns do not match the basis");
  return (scores.values * fit.basis.transpose()).rowwise() + fit.column_means.transpose();
}

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (c) out << ',';
    out << (static_cast<std::size_t>(c) < m.column_labels.size() ? m.column_labels[static_cast<std::size_t>(c)]
                                                                 : "c" + std::to_string(c + 1));
  }
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m.values(r, c));
    }
    out << '\n';
  }
}

}  // namespace gaitview
