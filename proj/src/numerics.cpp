#include "wigbell/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace wigbell {

namespace {

// Maclaurin series, accumulated in extended precision so the alternating
// cancellation near |x| = 3 stays below a double ulp.
double erf_series(double x) {
    const long double x2 = static_cast<long double>(x) * x;
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-21L * std::abs(sum) + 1e-300L) break;
    }
    return static_cast<double>(sum * (2.0L * std::numbers::inv_sqrtpi_v<long double>));
}

// Modified Lentz for sqrt(pi) e^{x^2} erfc(x) = 1/(x+ (1/2)/(x+ 1/(x+ ...))),
// partial numerators k/2. Rapidly convergent for x > 3.
double erfc_fraction(double x) {
    const double tiny = 1e-300;
    double f = tiny, c = f, d = 0.0;
    for (int n = 1; n < 300; ++n) {
        const double an = (n == 1) ? 1.0 : 0.5 * (n - 1);
        d = x + an * d;
        if (d == 0.0) d = tiny;
        c = x + an / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x * x) * std::numbers::inv_sqrtpi;
}

}  // namespace

double erf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("erf: non-finite argument");
    const double ax = std::abs(x);
    const double r = (ax <= 3.0) ? erf_series(ax) : 1.0 - erfc_fraction(ax);
    return std::signbit(x) ? -r : r;
}

namespace {

template <int N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};
};

// Nodes are the roots of the degree-N Legendre polynomial, found by Newton
// iteration from the Chebyshev-like initial guesses.
template <int N>
GaussRule<N> make_gauss_rule() {
    GaussRule<N> r;
    for (int i = 0; i < N; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= N; ++k) {
            const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = N * (t * p1 - p0) / (t * t - 1.0);
        r.x[i] = t;
        r.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
}

const GaussRule<7>& rule7() {
    static const GaussRule<7> r = make_gauss_rule<7>();
    return r;
}
const GaussRule<15>& rule15() {
    static const GaussRule<15> r = make_gauss_rule<15>();
    return r;
}

struct Panel {
    double a = 0.0, b = 0.0;
    double value = 0.0;  // 15-point estimate
    double error = 0.0;  // |15-point - 7-point|
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    const double xm = 0.5 * (a + b);
    const double xr = 0.5 * (b - a);
    double g7 = 0.0, g15 = 0.0;
    for (int i = 0; i < 7; ++i) g7 += rule7().w[i] * f(xm + xr * rule7().x[i]);
    for (int i = 0; i < 15; ++i)
        g15 += rule15().w[i] * f(xm + xr * rule15().x[i]);
    Panel p{a, b, xr * g15, std::abs(xr * (g15 - g7))};
    if (!std::isfinite(p.value))
        throw std::domain_error("integrate_1d: integrand not finite");
    return p;
}

struct ByError {
    bool operator()(const Panel& l, const Panel& r) const {
        return l.error < r.error;
    }
};

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a,
                              double b, const QuadratureOptions& opts) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("integrate_1d: need finite a < b");
    if (opts.abs_tol < 0 || opts.rel_tol < 0)
        throw std::invalid_argument("integrate_1d: negative tolerance");

    std::vector<Panel> heap;
    heap.push_back(eval_panel(f, a, b));
    std::int64_t evals = 22;
    double total = heap.front().value;
    double total_err = heap.front().error;

    auto result = [&] {
        // re-sum the panels so the answer does not carry incremental drift
        double v = 0.0, e = 0.0;
        for (const Panel& p : heap) {
            v += p.value;
            e += p.error;
        }
        return QuadratureResult{v, e, evals};
    };

    while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (evals + 44 > opts.max_evaluations)
            throw ConvergenceError("integrate_1d: evaluation budget exhausted",
                                   result());
        std::pop_heap(heap.begin(), heap.end(), ByError{});
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // panel no longer bisectable; accept its value as exact
            total_err -= worst.error;
            Panel flat = worst;
            flat.error = 0.0;
            heap.push_back(flat);
            std::push_heap(heap.begin(), heap.end(), ByError{});
            continue;
        }
        const Panel left = eval_panel(f, worst.a, mid);
        const Panel right = eval_panel(f, mid, worst.b);
        evals += 44;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), ByError{});
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), ByError{});
    }
    return result();
}

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, double rel_tol) {
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    opts.rel_tol = rel_tol;
    return integrate_1d(f, a, b, opts);
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f,
                              double ax, double bx, double ay, double by,
                              const QuadratureOptions& opts) {
    if (!std::isfinite(ay) || !std::isfinite(by) || !(ay < by))
        throw std::invalid_argument("integrate_2d: need finite ay < by");
    const double wx = bx - ax;
    QuadratureOptions inner = opts;
    inner.abs_tol = opts.abs_tol / (4.0 * std::max(1.0, wx));
    inner.rel_tol = opts.rel_tol / 4.0;

    std::int64_t inner_evals = 0;
    double max_inner_err = 0.0;
    auto outer_f = [&](double x) {
        const auto r =
            integrate_1d([&](double y) { return f(x, y); }, ay, by, inner);
        inner_evals += r.evaluations;
        max_inner_err = std::max(max_inner_err, r.error_estimate);
        return r.value;
    };
    const auto outer = integrate_1d(outer_f, ax, bx, opts);
    return {outer.value, outer.error_estimate + wx * max_inner_err,
            inner_evals};
}

namespace {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::next_raw() {
    std::uint64_t z = position++;
    z = mix64(z + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
    z = mix64(z ^ (seed + 0xd1b54a32d192ed03ULL));
    return mix64(z);
}

double RngStream::next_uniform() {
    return (static_cast<double>(next_raw() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double gaussian_sample(RngStream& stream, double mean, double std_dev) {
    if (!std::isfinite(mean) || !std::isfinite(std_dev) || std_dev < 0.0)
        throw std::domain_error("gaussian_sample: need finite mean, std_dev >= 0");
    return mean + std_dev * stream.next_normal();
}

}  // namespace wigbell
