// The finite-s Wigner density treated as a literal classical ensemble:
// sample initial phase points, propagate free trajectories, estimate the
// sign-correlation quantities. Independent oracle for the quadrature path.
#pragma once

#include <cstdint>
#include <vector>

#include "wigbell/numerics.hpp"
#include "wigbell/phase_space.hpp"

namespace wigbell {

struct McConfig {
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    std::uint64_t n_chunks = 4;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std dev / sqrt(n)
    std::uint64_t n = 0;
};

struct PhasePoint {
    double q1 = 0.0;
    double p1 = 0.0;
    double q2 = 0.0;
    double p2 = 0.0;
};

// Draws (q,p) from the coherent factor and (Q,P) from the squeezed factor,
// then maps through the beamsplitter. Consumes exactly eight uniforms.
PhasePoint sample_initial(const ModePairParams& params, RngStream& stream);

// sign(q_k + p_k t), with sign(0) := +1. particle is 1 or 2.
int trajectory_sign(const PhasePoint& point, int particle, double t);

// Fraction of samples whose two trajectory signs differ.
McEstimate estimate_D(const ModePairParams& params, TimePair t,
                      const McConfig& mc);

// 3 D(tau,tau) - D(3tau,3tau) with common random numbers: both time pairs
// are evaluated on the same initial samples.
McEstimate estimate_S(const ModePairParams& params, double tau,
                      const McConfig& mc);

enum class AuditVerdict { vacuous, consistent, violation };

struct LhvAuditRow {
    double tau = 0.0;
    McEstimate estimate;
    bool flagged = false;  // estimate.mean < -4 * std_error
};

struct LhvAuditReport {
    std::vector<LhvAuditRow> rows;
    int flag_count = 0;
    AuditVerdict verdict = AuditVerdict::vacuous;
};

LhvAuditReport lhv_audit(const ModePairParams& params,
                         const std::vector<double>& tau_grid,
                         const McConfig& mc);

}  // namespace wigbell
