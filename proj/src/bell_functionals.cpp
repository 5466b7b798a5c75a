#include "wigbell/bell_functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wigbell {

namespace {

// erf clamped to +/-1 beyond |x| = 8; avoids underflow work in the tails
double cerf(double x) {
    if (x > 8.0) return 1.0;
    if (x < -8.0) return -1.0;
    return erf(x);
}

void check_delta(const DeltaLimitParams& params) {
    if (!std::isfinite(params.q0) || !std::isfinite(params.p0))
        throw std::invalid_argument("DeltaLimitParams: non-finite mean");
    if (!std::isfinite(params.K) || !(params.K > 0.0))
        throw std::domain_error("DeltaLimitParams: K must be > 0");
}

void check_mode_pair(const ModePairParams& params) {
    if (!std::isfinite(params.q0) || !std::isfinite(params.p0))
        throw std::invalid_argument("ModePairParams: non-finite mean");
    if (!std::isfinite(params.s) || !(params.s > 0.0))
        throw std::domain_error("ModePairParams: s must be > 0");
}

}  // namespace

double w_closed(double q, double tau, const DeltaLimitParams& params) {
    check_delta(params);
    if (!std::isfinite(q) || !std::isfinite(tau))
        throw std::invalid_argument("w_closed: non-finite argument");
    const double c = params.q0 + params.p0 * tau;
    const double v = 1.0 + tau * tau;
    return params.K * std::numbers::inv_sqrtpi / std::sqrt(v) *
           std::exp(-(q - c) * (q - c) / v);
}

double F_closed(double tau, const DeltaLimitParams& params) {
    check_delta(params);
    if (!std::isfinite(tau))
        throw std::invalid_argument("F_closed: non-finite tau");
    const double a = params.q0 + params.p0 * tau;
    const double rt = std::sqrt(1.0 + tau * tau);
    return params.K * (2.0 * rt * std::numbers::inv_sqrtpi *
                           std::exp(-a * a / (rt * rt)) +
                       2.0 * a * cerf(a / rt));
}

double S_closed(double tau, const DeltaLimitParams& params) {
    return 3.0 * F_closed(tau, params) - F_closed(3.0 * tau, params);
}

SignCorrelationResult opposite_sign_probability(
    const PositionMarginal& marginal, const QuadratureOptions& opts) {
    if (!marginal.mean.allFinite() || !marginal.covariance.allFinite() ||
        !std::isfinite(marginal.log_weight))
        throw std::invalid_argument("opposite_sign_probability: non-finite input");
    if (std::abs(marginal.covariance(0, 1) - marginal.covariance(1, 0)) > 1e-12)
        throw std::invalid_argument(
            "opposite_sign_probability: covariance not symmetric");
    const double v1 = marginal.covariance(0, 0);
    const double v2 = marginal.covariance(1, 1);
    const double c = 0.5 * (marginal.covariance(0, 1) + marginal.covariance(1, 0));
    const double det = v1 * v2 - c * c;
    if (!(v1 > 0.0) || !(v2 > 0.0) || !(det > 0.0))
        throw std::domain_error(
            "opposite_sign_probability: covariance not positive definite");

    const double mu1 = marginal.mean(0);
    const double mu2 = marginal.mean(1);
    const double s1 = std::sqrt(v1);
    const double cond_sd = std::sqrt(det) / s1;  // sd of q2 | q1
    const double slope = c / v1;
    const double inv = 1.0 / (std::numbers::sqrt2 * cond_sd);
    const double norm = 1.0 / (s1 * std::sqrt(2.0 * std::numbers::pi));

    auto pdf1 = [=](double x) {
        const double z = (x - mu1) / s1;
        return norm * std::exp(-0.5 * z * z);
    };
    auto cond_mean = [=](double x) { return mu2 + slope * (x - mu1); };
    // P(q2 < 0 | q1 = x) and its complement
    auto p_neg = [=](double x) { return 0.5 * (1.0 - cerf(cond_mean(x) * inv)); };
    auto p_pos = [=](double x) { return 0.5 * (1.0 + cerf(cond_mean(x) * inv)); };

    const double lo = mu1 - 10.0 * s1;
    const double hi = mu1 + 10.0 * s1;
    std::vector<double> cuts = {lo, hi};
    auto add_cut = [&](double x) {
        if (x > lo && x < hi) cuts.push_back(x);
    };
    add_cut(0.0);
    add_cut(mu1);
    if (slope != 0.0) add_cut(mu1 - mu2 / slope);  // conditional mean crosses 0
    std::sort(cuts.begin(), cuts.end());

    QuadratureResult acc{0.0, 0.0, 0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double xa = cuts[i];
        const double xb = cuts[i + 1];
        if (!(xb - xa > 1e-13 * (hi - lo))) continue;
        const bool positive_side = 0.5 * (xa + xb) >= 0.0;
        auto f = [&](double x) {
            return pdf1(x) * (positive_side ? p_neg(x) : p_pos(x));
        };
        const auto r = integrate_1d(f, xa, xb, opts);
        acc.value += r.value;
        acc.error_estimate += r.error_estimate;
        acc.evaluations += r.evaluations;
    }
    // mass beyond the 10-sigma window
    acc.error_estimate += 2e-23;

    const double weight = std::exp(marginal.log_weight);
    SignCorrelationResult out;
    out.value = std::clamp(acc.value, 0.0, 1.0) * weight;
    out.method = Method::quadrature;
    out.error_estimate = acc.error_estimate * weight;
    out.normalized = std::abs(marginal.log_weight) < 1e-12;
    return out;
}

SignCorrelationResult F_finite_s(TimePair t, const ModePairParams& params,
                                 const QuadratureOptions& opts) {
    check_mode_pair(params);
    if (!std::isfinite(t.t1) || !std::isfinite(t.t2))
        throw std::invalid_argument("F_finite_s: non-finite time");
    const GaussianState in =
        tensor(coherent_wigner(params.q0, params.p0),
               squeezed_vacuum_wigner(params.s));
    const GaussianState out = free_evolution(beamsplitter_transform(in), t);
    return opposite_sign_probability(marginal_positions(out), opts);
}

SignCorrelationResult S_finite_s(double tau, const ModePairParams& params,
                                 const QuadratureOptions& opts) {
    if (!std::isfinite(tau))
        throw std::invalid_argument("S_finite_s: non-finite tau");
    const auto f1 = F_finite_s({tau, tau}, params, opts);
    const auto f3 = F_finite_s({3.0 * tau, 3.0 * tau}, params, opts);
    SignCorrelationResult out;
    out.value = 3.0 * f1.value - f3.value;
    out.method = Method::quadrature;
    out.error_estimate = 3.0 * f1.error_estimate + f3.error_estimate;
    out.normalized = false;
    return out;
}

double effective_K(double tau, const ModePairParams& params) {
    const double num = F_finite_s({tau, tau}, params).value;
    const double den = F_closed(tau, DeltaLimitParams{params.q0, params.p0, 1.0});
    if (!(den > 1e-250))
        throw std::domain_error("effective_K: closed form vanishes");
    return num / den;
}

TimeAsymmetryScan time_asymmetry_scan(double tau,
                                      const std::vector<double>& deltas,
                                      const ModePairParams& params) {
    if (!std::isfinite(tau))
        throw std::invalid_argument("time_asymmetry_scan: non-finite tau");
    TimeAsymmetryScan scan;
    scan.tau = tau;
    scan.base = F_finite_s({tau, tau}, params).value;
    for (double d : deltas) {
        if (!std::isfinite(d))
            throw std::invalid_argument("time_asymmetry_scan: non-finite delta");
        TimeAsymmetryRow row;
        row.delta = d;
        row.value = F_finite_s({tau + d, tau - d}, params).value;
        scan.rows.push_back(row);
        scan.max_deviation =
            std::max(scan.max_deviation, std::abs(row.value - scan.base));
    }
    return scan;
}

}  // namespace wigbell
