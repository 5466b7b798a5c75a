// Scan drivers behind the CLI: tau grids, CSV/SVG emission, the randomized
// cross-validation suites, and the audit runner. All outputs are
// deterministic; rerunning a command produces byte-identical files.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wigbell/bell_functionals.hpp"
#include "wigbell/lhv_mc.hpp"

namespace wigbell {

enum class OutputFormat { csv, svg, both };

struct ScanSpec {
    double tau_min = 0.0;
    double tau_max = 5.0;
    double tau_step = 0.01;  // must be > 0, tau_min <= tau_max
    DeltaLimitParams delta;  // q0/p0 shared with the finite-s commands
    std::vector<double> s_values;
    McConfig mc;
    std::string output_path;  // base path; .csv/.svg appended
    OutputFormat format = OutputFormat::both;
};

std::vector<double> tau_grid(double tau_min, double tau_max, double tau_step);

// 12-significant-digit shortest form, the CSV number format.
std::string fmt_g12(double v);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

bool write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series);

// Closed-form scan; CSV columns tau,F,F3,S where S is S(tau)/K.
int cmd_fig1(const ScanSpec& spec, std::ostream& log);

// Normalized finite-s scan; CSV columns s,tau,F_fin,S_fin,K_eff.
int cmd_finite_s(const ScanSpec& spec, std::ostream& log);

// Randomized cross-validation: closed form vs quadrature, then quadrature vs
// Monte Carlo. Returns 0 when every case is inside tolerance, 3 otherwise.
int cmd_oracle(std::uint64_t seed, std::uint64_t n_cases, std::ostream& log);

// Audit scan; CSV columns s,tau,S_mc,std_error,flagged. Returns 3 when any
// estimate is flagged, 0 otherwise.
int cmd_lhv_audit(const ScanSpec& spec, std::ostream& log);

// Case generators shared by cmd_oracle and the validation suite.
struct ClosedFormCase {
    DeltaLimitParams params;
    double tau = 0.0;
    double closed = 0.0;
    double quad = 0.0;
    double rel_err = 0.0;
};
std::vector<ClosedFormCase> closed_form_oracle_cases(std::uint64_t seed,
                                                     std::uint64_t n_cases);

struct McOracleCase {
    ModePairParams params;
    TimePair t;
    double quad = 0.0;
    McEstimate mc;
};
std::vector<McOracleCase> mc_oracle_cases(std::uint64_t seed,
                                          std::uint64_t n_cases,
                                          std::uint64_t n_samples);

}  // namespace wigbell
