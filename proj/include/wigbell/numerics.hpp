// Special functions, adaptive quadrature, and counter-based Gaussian sampling.
// Everything here is deterministic and value-semantic; no global state.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace wigbell {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute, best-effort bound
    std::int64_t evaluations = 0;
};

// Budget exhaustion: carries the best estimate reached so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best() const noexcept { return best_; }

private:
    QuadratureResult best_;
};

// abs error <= 1e-12 everywhere; erf(-x) == -erf(x) exactly.
double erf(double x);

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::int64_t max_evaluations = 200000;  // per axis for integrate_2d
};

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a,
                              double b, const QuadratureOptions& opts = {});
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, double rel_tol);

QuadratureResult integrate_2d(const std::function<double(double, double)>& f,
                              double ax, double bx, double ay, double by,
                              const QuadratureOptions& opts = {});

// Stateless counter stream: the n-th draw is a pure function of
// (seed, stream_id, n), so streams can be sliced and interleaved freely.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t position = 0;

    std::uint64_t next_raw();
    double next_uniform();  // open interval (0,1)
    double next_normal();   // consumes exactly two uniforms
};

double gaussian_sample(RngStream& stream, double mean, double std_dev);

}  // namespace wigbell
