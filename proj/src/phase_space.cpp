#include "wigbell/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace wigbell {

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                             double log_weight)
    : mean_(std::move(mean)),
      covariance_(std::move(covariance)),
      log_weight_(log_weight) {
    const Eigen::Index n = mean_.size();
    if (n <= 0 || n % 2 != 0)
        throw std::invalid_argument("GaussianState: mean must have even length");
    if (covariance_.rows() != n || covariance_.cols() != n)
        throw std::invalid_argument("GaussianState: covariance shape mismatch");
    if (!mean_.allFinite() || !covariance_.allFinite() ||
        !std::isfinite(log_weight_))
        throw std::invalid_argument("GaussianState: non-finite entry");
    const double asym =
        (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw std::invalid_argument("GaussianState: covariance not symmetric");
    covariance_ = (0.5 * (covariance_ + covariance_.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance_,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw std::domain_error(
            "GaussianState: covariance not positive definite");
}

double GaussianState::density(const Eigen::VectorXd& point) const {
    if (point.size() != mean_.size())
        throw std::invalid_argument("density: dimension mismatch");
    if (!point.allFinite())
        throw std::invalid_argument("density: non-finite point");
    const Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
    const Eigen::VectorXd y =
        llt.matrixL().solve((point - mean_).eval());
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < mean_.size(); ++i)
        log_det += 2.0 * std::log(llt.matrixL()(i, i));
    const double k = static_cast<double>(mean_.size());
    const double log_val =
        log_weight_ -
        0.5 * (k * std::log(2.0 * std::numbers::pi) + log_det + y.squaredNorm());
    return std::exp(log_val);
}

double PositionMarginal::density(double q1, double q2) const {
    const double v1 = covariance(0, 0);
    const double v2 = covariance(1, 1);
    const double c = 0.5 * (covariance(0, 1) + covariance(1, 0));
    const double det = v1 * v2 - c * c;
    if (!(det > 0.0) || !(v1 > 0.0))
        throw std::domain_error("PositionMarginal: covariance not positive definite");
    const double d1 = q1 - mean(0);
    const double d2 = q2 - mean(1);
    const double quad = (d1 * d1 * v2 - 2.0 * d1 * d2 * c + d2 * d2 * v1) / det;
    return std::exp(log_weight - 0.5 * quad) /
           (2.0 * std::numbers::pi * std::sqrt(det));
}

GaussianState coherent_wigner(double q0, double p0) {
    if (!std::isfinite(q0) || !std::isfinite(p0))
        throw std::invalid_argument("coherent_wigner: non-finite mean");
    Eigen::Vector2d mean(q0, p0);
    Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
    return GaussianState(mean, cov);
}

GaussianState squeezed_vacuum_wigner(double s) {
    if (!std::isfinite(s) || !(s > 0.0))
        throw std::domain_error("squeezed_vacuum_wigner: s must be > 0");
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = 1.0 / (2.0 * s * s);
    cov(1, 1) = s * s / 2.0;
    return GaussianState(mean, cov);
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const Eigen::Index na = a.mean().size();
    const Eigen::Index nb = b.mean().size();
    Eigen::VectorXd mean(na + nb);
    mean << a.mean(), b.mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.covariance();
    cov.bottomRightCorner(nb, nb) = b.covariance();
    return GaussianState(mean, cov, a.log_weight() + b.log_weight());
}

const Eigen::Matrix4d& beamsplitter_matrix() {
    static const Eigen::Matrix4d m = [] {
        const double r = 1.0 / std::numbers::sqrt2;
        Eigen::Matrix4d b;
        b << r, 0, r, 0,
             0, r, 0, r,
            -r, 0, r, 0,
             0, -r, 0, r;
        return b;
    }();
    return m;
}

namespace {

GaussianState apply_linear(const GaussianState& state,
                           const Eigen::Matrix4d& m) {
    Eigen::VectorXd mean = m * state.mean();
    Eigen::MatrixXd cov = m * state.covariance() * m.transpose();
    cov = (0.5 * (cov + cov.transpose())).eval();
    return GaussianState(mean, cov, state.log_weight());
}

}  // namespace

GaussianState beamsplitter_transform(const GaussianState& state) {
    if (state.n_modes() != 2)
        throw std::invalid_argument("beamsplitter_transform: need 2 modes");
    return apply_linear(state, beamsplitter_matrix());
}

GaussianState free_evolution(const GaussianState& state, TimePair t) {
    if (state.n_modes() != 2)
        throw std::invalid_argument("free_evolution: need 2 modes");
    if (!std::isfinite(t.t1) || !std::isfinite(t.t2))
        throw std::invalid_argument("free_evolution: non-finite time");
    Eigen::Matrix4d shear = Eigen::Matrix4d::Identity();
    shear(0, 1) = t.t1;
    shear(2, 3) = t.t2;
    return apply_linear(state, shear);
}

PositionMarginal marginal_positions(const GaussianState& state) {
    if (state.n_modes() != 2)
        throw std::invalid_argument("marginal_positions: need 2 modes");
    PositionMarginal m;
    m.mean << state.mean()(0), state.mean()(2);
    const double c =
        0.5 * (state.covariance()(0, 2) + state.covariance()(2, 0));
    m.covariance << state.covariance()(0, 0), c, c, state.covariance()(2, 2);
    m.log_weight = state.log_weight();
    return m;
}

}  // namespace wigbell
