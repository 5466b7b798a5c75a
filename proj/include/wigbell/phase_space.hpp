// Gaussian Wigner states as (mean, covariance, log_weight) triples, plus the
// linear optics they go through: tensor products, the balanced beamsplitter,
// free evolution with independent times per mode, and position marginals.
#pragma once

#include <Eigen/Dense>

namespace wigbell {

struct TimePair {
    double t1 = 0.0;
    double t2 = 0.0;
};

struct ModePairParams {
    double q0 = 0.0;
    double p0 = 0.0;
    double s = 1.0;  // squeezing, must be > 0
};

// Immutable n-mode Gaussian density  exp(log_weight) * N(mean, covariance)
// in coordinates (q1, p1, ..., qn, pn). Quadrature variance of vacuum is 1/2.
class GaussianState {
public:
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                  double log_weight = 0.0);

    int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& covariance() const { return covariance_; }
    double log_weight() const { return log_weight_; }

    double density(const Eigen::VectorXd& point) const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd covariance_;
    double log_weight_;
};

// Joint (q1, q2) position Gaussian; not a phase-space state.
struct PositionMarginal {
    Eigen::Vector2d mean;
    Eigen::Matrix2d covariance;
    double log_weight = 0.0;

    double density(double q1, double q2) const;
};

GaussianState coherent_wigner(double q0, double p0);
GaussianState squeezed_vacuum_wigner(double s);
GaussianState tensor(const GaussianState& a, const GaussianState& b);

// Balanced beamsplitter, (q,p,Q,P) -> (q1,p1,q2,p2) with
// q1=(q+Q)/sqrt2, p1=(p+P)/sqrt2, q2=(Q-q)/sqrt2, p2=(P-p)/sqrt2.
GaussianState beamsplitter_transform(const GaussianState& state);
const Eigen::Matrix4d& beamsplitter_matrix();

// Shear q_k -> q_k + p_k * t_k; momenta unchanged.
GaussianState free_evolution(const GaussianState& state, TimePair t);

PositionMarginal marginal_positions(const GaussianState& state);

}  // namespace wigbell
