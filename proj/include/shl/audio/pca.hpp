#pragma once

#include <Eigen/Dense>

namespace shl::audio {

// Classical (centered, unscaled) PCA.
struct PcaModel {
    Eigen::VectorXd mean;                // d
    Eigen::MatrixXd components;          // k x d, orthonormal rows
    Eigen::VectorXd explained_variance;  // k, non-increasing
    double total_variance = 0.0;         // sum of all column variances

    Eigen::Index k() const noexcept { return components.rows(); }
    Eigen::Index input_dim() const noexcept { return mean.size(); }
    Eigen::VectorXd explained_variance_ratio() const;
};

// Top-k principal axes of the rows of `data` (observations x features),
// computed from the thin SVD of the centered matrix. Each component's sign is
// fixed so that its largest-magnitude coordinate is positive.
PcaModel fit_pca(const Eigen::MatrixXd& data, Eigen::Index k);

// (x - mean) * components^T
Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd project_rows(const PcaModel& model, const Eigen::MatrixXd& data);

// mean + scores * components
Eigen::VectorXd reconstruct(const PcaModel& model, const Eigen::VectorXd& scores);

}  // namespace shl::audio
