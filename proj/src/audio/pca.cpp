#include "shl/audio/pca.hpp"

#include <string>

#include "shl/core/error.hpp"

namespace shl::audio {

Eigen::VectorXd PcaModel::explained_variance_ratio() const {
    if (total_variance <= 0.0) return Eigen::VectorXd::Zero(explained_variance.size());
    return explained_variance / total_variance;
}

PcaModel fit_pca(const Eigen::MatrixXd& data, Eigen::Index k) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (k < 1) throw ConfigError("PCA needs k >= 1");
    if (k > std::min(n, d))
        throw ConfigError("PCA k = " + std::to_string(k) + " exceeds min(rows, cols) = " +
                          std::to_string(std::min(n, d)));
    if (!data.allFinite()) throw InputError("PCA input contains non-finite values");

    PcaModel model;
    model.mean = data.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
    const double dof = static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
    model.total_variance = centered.squaredNorm() / dof;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const Eigen::MatrixXd& v = svd.matrixV();

    model.components.resize(k, d);
    model.explained_variance.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::VectorXd axis = v.col(i);
        Eigen::Index largest = 0;
        axis.cwiseAbs().maxCoeff(&largest);
        if (axis(largest) < 0.0) axis = -axis;
        model.components.row(i) = axis.transpose();
        model.explained_variance(i) = sigma(i) * sigma(i) / dof;
    }
    return model;
}

Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.input_dim())
        throw InputError("PCA projection expects " + std::to_string(model.input_dim()) +
                         " values, got " + std::to_string(x.size()));
    return model.components * (x - model.mean);
}

Eigen::MatrixXd project_rows(const PcaModel& model, const Eigen::MatrixXd& data) {
    if (data.cols() != model.input_dim())
        throw InputError("PCA projection expects " + std::to_string(model.input_dim()) + " columns");
    return (data.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::VectorXd reconstruct(const PcaModel& model, const Eigen::VectorXd& scores) {
    if (scores.size() != model.k()) throw InputError("PCA reconstruction expects k scores");
    return model.mean + model.components.transpose() * scores;
}

}  // namespace shl::audio
