#include "dynprice/ols.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace dynprice {

void Design::add_row(std::span<const double> x) {
    if (x.size() != dim_) throw std::invalid_argument("context has wrong dimension");
    values_.insert(values_.end(), x.begin(), x.end());
}

double OlsFit::predict(std::span<const double> x) const {
    if (x.size() != theta.size()) throw std::invalid_argument("context has wrong dimension");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += theta[i] * x[i];
    return acc;
}

OlsFit fit_ols(const Design& contexts, std::span<const double> responses) {
    const std::size_t n = contexts.rows();
    const std::size_t d = contexts.dim();
    if (d == 0) throw std::invalid_argument("context dimension must be positive");
    if (responses.size() != n) throw std::invalid_argument("contexts and responses differ in length");
    if (n < d) throw SingularDesign();

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> x(contexts.data().data(), static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(d));
    Eigen::Map<const Eigen::VectorXd> y(responses.data(), static_cast<Eigen::Index>(n));

    Eigen::VectorXd scale = (x.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (!(scale(j) > 0.0) || !std::isfinite(scale(j))) throw SingularDesign();
    }
    Eigen::MatrixXd scaled = x * scale.cwiseInverse().asDiagonal();

    Eigen::MatrixXd gram = scaled.transpose() * scaled / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double smallest = std::max(0.0, eig.eigenvalues().minCoeff());
    if (!(smallest > kSingularThreshold)) throw SingularDesign();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd theta = beta.cwiseQuotient(scale);

    OlsFit fit;
    fit.n = n;
    fit.condition_hint = smallest;
    fit.theta.assign(theta.data(), theta.data() + theta.size());
    for (double t : fit.theta) {
        if (!std::isfinite(t)) throw SingularDesign();
    }
    return fit;
}

OlsFit intercept_correction(OlsFit fit, double p_min) {
    if (!fit.theta.empty()) fit.theta[0] += p_min;
    return fit;
}

}  // namespace dynprice
