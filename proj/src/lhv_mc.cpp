#include "wigbell/lhv_mc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace wigbell {

namespace {

void check_mode_pair(const ModePairParams& params) {
    if (!std::isfinite(params.q0) || !std::isfinite(params.p0))
        throw std::invalid_argument("ModePairParams: non-finite mean");
    if (!std::isfinite(params.s) || !(params.s > 0.0))
        throw std::domain_error("ModePairParams: s must be > 0");
}

void check_mc(const McConfig& mc) {
    if (mc.n_samples < 1)
        throw std::invalid_argument("McConfig: n_samples must be >= 1");
    if (mc.n_chunks < 1)
        throw std::invalid_argument("McConfig: n_chunks must be >= 1");
}

struct ChunkSums {
    std::uint64_t a = 0;   // signs differ at the first time pair
    std::uint64_t b = 0;   // signs differ at the second time pair
    std::uint64_t ab = 0;  // both
};

// Chunk i always uses stream_id i from position 0, so results are a pure
// function of (seed, n_samples, n_chunks) regardless of thread count.
template <class Body>
std::vector<ChunkSums> run_chunks(const McConfig& mc, const Body& body) {
    const std::uint64_t chunks = mc.n_chunks;
    std::vector<ChunkSums> sums(chunks);
    const unsigned hw = std::thread::hardware_concurrency();
    const std::uint64_t workers =
        std::min<std::uint64_t>(chunks, hw == 0 ? 1 : hw);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t i = w; i < chunks; i += workers) {
                RngStream stream{mc.seed, i, 0};
                const std::uint64_t n_i =
                    mc.n_samples / chunks + (i < mc.n_samples % chunks ? 1 : 0);
                sums[i] = body(stream, n_i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return sums;
}

McEstimate reduce_difference(const std::vector<ChunkSums>& sums,
                             std::uint64_t n_samples) {
    std::uint64_t sa = 0, sb = 0, sab = 0;
    for (const auto& s : sums) {
        sa += s.a;
        sb += s.b;
        sab += s.ab;
    }
    const double n = static_cast<double>(n_samples);
    // per-sample value d = 3*a - b with a, b in {0,1}
    const double sum_d = 3.0 * static_cast<double>(sa) - static_cast<double>(sb);
    const double sum_d2 = 9.0 * static_cast<double>(sa) +
                          static_cast<double>(sb) -
                          6.0 * static_cast<double>(sab);
    McEstimate est;
    est.mean = sum_d / n;
    est.n = n_samples;
    if (n_samples >= 2) {
        const double var =
            std::max(0.0, (sum_d2 - sum_d * sum_d / n) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

}  // namespace

PhasePoint sample_initial(const ModePairParams& params, RngStream& stream) {
    check_mode_pair(params);
    const double r = 1.0 / std::numbers::sqrt2;
    const double q = gaussian_sample(stream, params.q0, r);
    const double p = gaussian_sample(stream, params.p0, r);
    const double qq = gaussian_sample(stream, 0.0, r / params.s);
    const double pp = gaussian_sample(stream, 0.0, r * params.s);
    PhasePoint pt;
    pt.q1 = (q + qq) * r;
    pt.p1 = (p + pp) * r;
    pt.q2 = (qq - q) * r;
    pt.p2 = (pp - p) * r;
    return pt;
}

int trajectory_sign(const PhasePoint& point, int particle, double t) {
    if (particle != 1 && particle != 2)
        throw std::invalid_argument("trajectory_sign: particle must be 1 or 2");
    if (!std::isfinite(t))
        throw std::invalid_argument("trajectory_sign: non-finite time");
    const double x = (particle == 1) ? point.q1 + point.p1 * t
                                     : point.q2 + point.p2 * t;
    return x >= 0.0 ? 1 : -1;
}

McEstimate estimate_D(const ModePairParams& params, TimePair t,
                      const McConfig& mc) {
    check_mode_pair(params);
    check_mc(mc);
    if (!std::isfinite(t.t1) || !std::isfinite(t.t2))
        throw std::invalid_argument("estimate_D: non-finite time");
    const auto sums = run_chunks(mc, [&](RngStream& stream, std::uint64_t n_i) {
        ChunkSums s;
        for (std::uint64_t j = 0; j < n_i; ++j) {
            const PhasePoint pt = sample_initial(params, stream);
            s.a += trajectory_sign(pt, 1, t.t1) != trajectory_sign(pt, 2, t.t2);
        }
        return s;
    });
    std::uint64_t total = 0;
    for (const auto& s : sums) total += s.a;
    const double n = static_cast<double>(mc.n_samples);
    McEstimate est;
    est.mean = static_cast<double>(total) / n;
    est.n = mc.n_samples;
    if (mc.n_samples >= 2) {
        const double sum = static_cast<double>(total);
        const double var = std::max(0.0, (sum - sum * sum / n) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

McEstimate estimate_S(const ModePairParams& params, double tau,
                      const McConfig& mc) {
    check_mode_pair(params);
    check_mc(mc);
    if (!std::isfinite(tau))
        throw std::invalid_argument("estimate_S: non-finite tau");
    const double t3 = 3.0 * tau;
    const auto sums = run_chunks(mc, [&](RngStream& stream, std::uint64_t n_i) {
        ChunkSums s;
        for (std::uint64_t j = 0; j < n_i; ++j) {
            const PhasePoint pt = sample_initial(params, stream);
            const bool a =
                trajectory_sign(pt, 1, tau) != trajectory_sign(pt, 2, tau);
            const bool b =
                trajectory_sign(pt, 1, t3) != trajectory_sign(pt, 2, t3);
            s.a += a;
            s.b += b;
            s.ab += a && b;
        }
        return s;
    });
    return reduce_difference(sums, mc.n_samples);
}

LhvAuditReport lhv_audit(const ModePairParams& params,
                         const std::vector<double>& tau_grid,
                         const McConfig& mc) {
    LhvAuditReport report;
    if (tau_grid.empty()) {
        report.verdict = AuditVerdict::vacuous;
        return report;
    }
    for (double tau : tau_grid) {
        LhvAuditRow row;
        row.tau = tau;
        row.estimate = estimate_S(params, tau, mc);
        row.flagged = row.estimate.mean < -4.0 * row.estimate.std_error;
        report.flag_count += row.flagged;
        report.rows.push_back(row);
    }
    report.verdict = report.flag_count > 0 ? AuditVerdict::violation
                                           : AuditVerdict::consistent;
    return report;
}

}  // namespace wigbell
