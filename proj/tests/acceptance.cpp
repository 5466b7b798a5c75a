// Acceptance gate: eight numbered criteria, one PASS/FAIL line each.
// Run with no arguments for the full gate, or pass criterion numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wigbell/bell_functionals.hpp"
#include "wigbell/lhv_mc.hpp"
#include "wigbell/scan.hpp"

using namespace wigbell;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string num(double v) { return fmt_g12(v); }

// criterion 1: the displaced delta-limit scan goes negative, with the pinned
// values at tau = 0 and tau = 1
Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const DeltaLimitParams d{1.0, -1.0, 1.0};
    double min_s = 1e300, min_tau = 0.0;
    for (double tau : tau_grid(0.0, 5.0, 0.01)) {
        const double s = S_closed(tau, d) / d.K;
        if (s < min_s) {
            min_s = s;
            min_tau = tau;
        }
    }
    const double s0 = S_closed(0.0, d) / d.K;
    const double s1 = S_closed(1.0, d) / d.K;
    const double f0 = F_closed(0.0, d) / d.K;
    const double dt = seconds_since(t0);
    const bool pass = min_s < 0.0 && s0 > 0.0 &&
                      std::abs(s0 - 2.0 * f0) <= 1e-12 &&
                      std::abs(s1 + 0.12) <= 0.01 && dt < 5.0;
    return {pass, "min S/K = " + num(min_s) + " at tau = " + num(min_tau) +
                      ", S(0)/K = " + num(s0) + " = 2 F(0), S(1)/K = " +
                      num(s1) + " (target -0.12 +/- 0.01), " + num(dt) +
                      "s (limit 5s)"};
}

// criterion 2: closed form vs direct quadrature on 50 randomized cases
Outcome criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cases = closed_form_oracle_cases(1, 50);
    double max_rel = 0.0;
    for (const auto& c : cases) max_rel = std::max(max_rel, c.rel_err);
    const double dt = seconds_since(t0);
    const bool pass = cases.size() == 50 && max_rel <= 1e-8 && dt < 30.0;
    return {pass, "50 cases, max rel err = " + num(max_rel) +
                      " (tol 1e-8), " + num(dt) + "s (limit 30s)"};
}

// criterion 3: centered scan stays nonnegative and matches the algebraic form
Outcome criterion_3() {
    const DeltaLimitParams d{0.0, 0.0, 1.0};
    double min_s = 1e300, max_dev = 0.0;
    for (double tau : tau_grid(0.0, 20.0, 0.01)) {
        const double s = S_closed(tau, d);
        const double algebraic = 2.0 * std::numbers::inv_sqrtpi *
                                 (3.0 * std::sqrt(1.0 + tau * tau) -
                                  std::sqrt(1.0 + 9.0 * tau * tau));
        min_s = std::min(min_s, s);
        max_dev = std::max(max_dev, std::abs(s - algebraic));
    }
    const bool pass = min_s >= -1e-12 && max_dev <= 1e-12;
    return {pass, "2001 points on [0,20], min S = " + num(min_s) +
                      " (>= -1e-12), max |S - algebraic| = " + num(max_dev) +
                      " (tol 1e-12)"};
}

// criterion 4: marginals stay normalized and F stays a probability across
// squeezing and evolution times up to 10
Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_mass = 0.0, f_min = 1e300, f_max = -1e300;
    bool pass = true;
    for (double s : {1.0, 0.1, 0.02}) {
        for (double t1 : {0.0, 3.7, 10.0}) {
            for (double t2 : {0.0, 3.7, 10.0}) {
                const ModePairParams mp{1.0, -1.0, s};
                const auto state = free_evolution(
                    beamsplitter_transform(
                        tensor(coherent_wigner(mp.q0, mp.p0),
                               squeezed_vacuum_wigner(mp.s))),
                    {t1, t2});
                const auto marg = marginal_positions(state);

                // whitened coordinates keep the integrand round for the
                // adaptive rule even at extreme aspect ratios
                const Eigen::LLT<Eigen::Matrix2d> llt(marg.covariance);
                const Eigen::Matrix2d l = llt.matrixL();
                const double det_l = l(0, 0) * l(1, 1);
                QuadratureOptions opts;
                opts.abs_tol = 1e-9;
                opts.rel_tol = 1e-9;
                opts.max_evaluations = 1000000;
                const auto mass = integrate_2d(
                    [&](double u, double v) {
                        const double x = marg.mean(0) + l(0, 0) * u;
                        const double y =
                            marg.mean(1) + l(1, 0) * u + l(1, 1) * v;
                        return marg.density(x, y) * det_l;
                    },
                    -10.0, 10.0, -10.0, 10.0, opts);
                worst_mass = std::max(worst_mass, std::abs(mass.value - 1.0));
                pass = pass && std::abs(mass.value - 1.0) <= 1e-6;

                const double f = F_finite_s({t1, t2}, mp).value;
                f_min = std::min(f_min, f);
                f_max = std::max(f_max, f);
                pass = pass && f >= 0.0 && f <= 1.0;
            }
        }
    }
    const double dt = seconds_since(t0);
    pass = pass && dt < 60.0;
    return {pass, "27 (s, t1, t2) combos, worst |mass - 1| = " +
                      num(worst_mass) + " (tol 1e-6), F range [" + num(f_min) +
                      ", " + num(f_max) + "] in [0,1], " + num(dt) +
                      "s (limit 60s)"};
}

// criterion 5: (sqrt(pi)/s) F_finite_s approaches F_closed as s -> 0
Outcome criterion_5() {
    const DeltaLimitParams d{1.0, -1.0, 1.0};
    auto deviation = [&](double s) {
        const ModePairParams mp{1.0, -1.0, s};
        double worst = 0.0;
        for (double tau : tau_grid(0.0, 2.0, 0.1)) {
            const double fin = F_finite_s({tau, tau}, mp).value *
                               std::sqrt(std::numbers::pi) / s;
            const double closed = F_closed(tau, d);
            worst = std::max(worst, std::abs(fin - closed) / closed);
        }
        return worst;
    };
    const double dev_01 = deviation(0.1);
    const double dev_002 = deviation(0.02);
    const bool pass = dev_002 < dev_01 && dev_002 < 0.02;
    return {pass, "max rel deviation on [0,2]: s=0.1 -> " + num(dev_01) +
                      ", s=0.02 -> " + num(dev_002) +
                      " (must shrink and be < 0.02)"};
}

// criterion 6: normalized ensembles must never push S below the noise floor,
// by quadrature (>= -1e-6) and by the trajectory sampler (>= -4 se)
Outcome criterion_6() {
    const auto grid = tau_grid(0.0, 10.0, 0.25);
    bool pass = true;
    std::string detail;
    for (double s : {0.5, 0.1, 0.02}) {
        const ModePairParams mp{1.0, -1.0, s};
        int quad_flags = 0, mc_flags = 0;
        double min_quad = 1e300, min_tau = 0.0;
        for (double tau : grid) {
            const double v = S_finite_s(tau, mp).value;
            if (v < min_quad) {
                min_quad = v;
                min_tau = tau;
            }
            quad_flags += v < -1e-6;
            const auto est = estimate_S(mp, tau, McConfig{1000000, 1, 4});
            mc_flags += est.mean < -4.0 * est.std_error;
        }
        pass = pass && quad_flags == 0 && mc_flags == 0;
        if (!detail.empty()) detail += "; ";
        detail += "s=" + num(s) + ": quad flags " +
                  std::to_string(quad_flags) + "/41, mc flags " +
                  std::to_string(mc_flags) + "/41, min S_fin = " +
                  num(min_quad) + " at tau = " + num(min_tau);
    }
    return {pass, detail};
}

// criterion 7: the effective normalization drifts by more than 10% over the
// scan, so no single constant K describes the finite-s data
Outcome criterion_7() {
    const ModePairParams mp{1.0, -1.0, 0.1};
    const double k0 = effective_K(0.0, mp);
    const double k10 = effective_K(10.0, mp);
    const double drift = std::abs(k10 - k0) / k0;
    const bool pass = drift > 0.10;
    return {pass, "K_eff(0) = " + num(k0) + ", K_eff(10) = " + num(k10) +
                      ", relative drift = " + num(drift) + " (> 0.10)"};
}

// criterion 8: the trajectory sampler reproduces quadrature within 4 standard
// errors on randomized cases, and reruns bit-identically
Outcome criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cases = mc_oracle_cases(1, 20, 1000000);
    int ok_cases = 0;
    double worst_z = 0.0;
    for (const auto& c : cases) {
        const double diff = std::abs(c.mc.mean - c.quad);
        const double z = c.mc.std_error > 0.0 ? diff / c.mc.std_error : 0.0;
        worst_z = std::max(worst_z, z);
        ok_cases += diff <= 4.0 * c.mc.std_error;
    }
    const auto rerun = mc_oracle_cases(1, 1, 1000000);
    const bool deterministic = !cases.empty() && !rerun.empty() &&
                               rerun[0].mc.mean == cases[0].mc.mean &&
                               rerun[0].mc.std_error == cases[0].mc.std_error;
    const double dt = seconds_since(t0);
    const bool pass =
        ok_cases == 20 && deterministic && dt < 120.0;
    return {pass, std::to_string(ok_cases) +
                      "/20 cases within 4 se, worst |z| = " + num(worst_z) +
                      ", rerun bit-identical: " +
                      (deterministic ? "yes" : "NO") + ", " + num(dt) +
                      "s (limit 120s)"};
}

}  // namespace

int main(int argc, char** argv) {
    Outcome (*criteria[8])() = {criterion_1, criterion_2, criterion_3,
                                criterion_4, criterion_5, criterion_6,
                                criterion_7, criterion_8};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > 8) {
            std::fprintf(stderr, "usage: %s [criterion 1..8]...\n", argv[0]);
            return 2;
        }
        selected.push_back(k);
    }
    if (selected.empty())
        for (int k = 1; k <= 8; ++k) selected.push_back(k);

    int failures = 0;
    for (int k : selected) {
        const Outcome o = criteria[k - 1]();
        std::printf("criterion %d: %s  %s\n", k, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    if (selected.size() > 1)
        std::printf("%zu/%zu criteria passed\n", selected.size() - failures,
                    selected.size());
    return failures == 0 ? 0 : 1;
}
