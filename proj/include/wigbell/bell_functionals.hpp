// Sign-correlation functionals: the delta-limit closed forms w, F, S, their
// normalized finite-s counterparts computed from the full state pipeline, and
// the effective normalization factor that relates the two.
#pragma once

#include <vector>

#include "wigbell/numerics.hpp"
#include "wigbell/phase_space.hpp"

namespace wigbell {

// Parameters of the delta-limit branch; K is the weight of the flat,
// unnormalizable momentum-delta state, carried through all closed forms.
struct DeltaLimitParams {
    double q0 = 0.0;
    double p0 = 0.0;
    double K = 1.0;  // must be > 0
};

enum class Method { closed_form, quadrature, monte_carlo };

struct SignCorrelationResult {
    double value = 0.0;
    Method method = Method::closed_form;
    double error_estimate = 0.0;
    bool normalized = false;  // true when value is a probability in [0,1]
};

// Reduced one-dimensional distribution at mean time tau = (t1+t2)/2:
// (K/sqrt(pi)) (1+tau^2)^{-1/2} exp[-(q - q0 - p0 tau)^2 / (1+tau^2)].
double w_closed(double q, double tau, const DeltaLimitParams& params);

// Opposite-sign functional of w_closed, K on both terms:
// K [ (2 sqrt(1+tau^2)/sqrt(pi)) e^{-a^2/(1+tau^2)} + 2 a erf(a/sqrt(1+tau^2)) ],
// a = q0 + p0 tau. Always >= 0.
double F_closed(double tau, const DeltaLimitParams& params);

// S(tau) = 3 F(tau) - F(3 tau).
double S_closed(double tau, const DeltaLimitParams& params);

// Mass of {q1>0, q2<0} u {q1<0, q2>0}: inner variable reduced to an erf,
// outer variable integrated adaptively over mean +/- 10 sigma.
SignCorrelationResult opposite_sign_probability(
    const PositionMarginal& marginal, const QuadratureOptions& opts = {});

// Normalized pipeline: coherent(q0,p0) x squeezed(s) -> beamsplitter ->
// free evolution at t -> position marginal -> opposite-sign probability.
SignCorrelationResult F_finite_s(TimePair t, const ModePairParams& params,
                                 const QuadratureOptions& opts = {});

// 3 F_finite_s(tau,tau) - F_finite_s(3tau,3tau); absolute errors add.
SignCorrelationResult S_finite_s(double tau, const ModePairParams& params,
                                 const QuadratureOptions& opts = {});

// F_finite_s((tau,tau)) / F_closed(tau; K=1): the factor that would make the
// unnormalized closed form reproduce the true probability at this tau.
double effective_K(double tau, const ModePairParams& params);

struct TimeAsymmetryRow {
    double delta = 0.0;
    double value = 0.0;  // F_finite_s((tau+delta, tau-delta))
};

struct TimeAsymmetryScan {
    double tau = 0.0;
    double base = 0.0;  // F_finite_s((tau, tau))
    std::vector<TimeAsymmetryRow> rows;
    double max_deviation = 0.0;
};

TimeAsymmetryScan time_asymmetry_scan(double tau,
                                      const std::vector<double>& deltas,
                                      const ModePairParams& params);

}  // namespace wigbell
