#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wigbell/scan.hpp"

namespace {

void add_grid_options(CLI::App* cmd, wigbell::ScanSpec& spec) {
    cmd->add_option("--tau-min", spec.tau_min, "grid start")
        ->capture_default_str();
    cmd->add_option("--tau-max", spec.tau_max, "grid end")
        ->capture_default_str();
    cmd->add_option("--tau-step", spec.tau_step, "grid spacing, > 0")
        ->capture_default_str();
}

void add_output_options(CLI::App* cmd, wigbell::ScanSpec& spec,
                        const std::string& default_base) {
    spec.output_path = default_base;
    cmd->add_option("--out", spec.output_path,
                    "output base path; .csv/.svg appended")
        ->capture_default_str();
    const std::map<std::string, wigbell::OutputFormat> formats{
        {"csv", wigbell::OutputFormat::csv},
        {"svg", wigbell::OutputFormat::svg},
        {"both", wigbell::OutputFormat::both}};
    cmd->add_option("--format", spec.format, "csv, svg, or both")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian phase-space sign-correlation scans"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value file");

    wigbell::ScanSpec fig1_spec;
    fig1_spec.delta = {1.0, -1.0, 1.0};
    auto* fig1 = app.add_subcommand(
        "fig1", "closed-form delta-limit scan of F and S over tau");
    fig1->add_option("--q0", fig1_spec.delta.q0, "initial position mean")
        ->capture_default_str();
    fig1->add_option("--p0", fig1_spec.delta.p0, "initial momentum mean")
        ->capture_default_str();
    fig1->add_option("--K", fig1_spec.delta.K, "delta-state weight, > 0")
        ->capture_default_str();
    add_grid_options(fig1, fig1_spec);
    add_output_options(fig1, fig1_spec, "fig1");

    wigbell::ScanSpec fs_spec;
    fs_spec.delta = {1.0, -1.0, 1.0};
    fs_spec.tau_max = 10.0;
    fs_spec.tau_step = 0.25;
    auto* finite_s = app.add_subcommand(
        "finite-s", "normalized finite-squeezing scan with effective K");
    finite_s->add_option("--q0", fs_spec.delta.q0, "initial position mean")
        ->capture_default_str();
    finite_s->add_option("--p0", fs_spec.delta.p0, "initial momentum mean")
        ->capture_default_str();
    finite_s
        ->add_option("--s", fs_spec.s_values,
                     "squeezing values, > 0 (default: 0.5 0.1 0.02)")
        ->expected(-1);
    add_grid_options(finite_s, fs_spec);
    add_output_options(finite_s, fs_spec, "finite_s");

    std::uint64_t oracle_seed = 1;
    std::uint64_t oracle_cases = 50;
    auto* oracle = app.add_subcommand(
        "oracle", "randomized cross-checks: closed form vs quadrature vs MC");
    oracle->add_option("--seed", oracle_seed, "case generator seed")
        ->capture_default_str();
    oracle->add_option("--cases", oracle_cases, "number of cases")
        ->capture_default_str();

    wigbell::ScanSpec audit_spec;
    audit_spec.delta = {1.0, -1.0, 1.0};
    audit_spec.tau_max = 10.0;
    audit_spec.tau_step = 0.25;
    audit_spec.format = wigbell::OutputFormat::csv;
    auto* audit = app.add_subcommand(
        "lhv-audit", "Monte Carlo trajectory-ensemble audit of S over tau");
    audit->add_option("--q0", audit_spec.delta.q0, "initial position mean")
        ->capture_default_str();
    audit->add_option("--p0", audit_spec.delta.p0, "initial momentum mean")
        ->capture_default_str();
    audit
        ->add_option("--s", audit_spec.s_values,
                     "squeezing values, > 0 (default: 0.1)")
        ->expected(-1);
    add_grid_options(audit, audit_spec);
    audit->add_option("--samples", audit_spec.mc.n_samples, "samples per point")
        ->capture_default_str();
    audit->add_option("--seed", audit_spec.mc.seed, "sampler seed")
        ->capture_default_str();
    audit->add_option("--chunks", audit_spec.mc.n_chunks, "independent chunks")
        ->capture_default_str();
    add_output_options(audit, audit_spec, "lhv_audit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (fig1->parsed()) return wigbell::cmd_fig1(fig1_spec, std::cout);
        if (finite_s->parsed())
            return wigbell::cmd_finite_s(fs_spec, std::cout);
        if (oracle->parsed())
            return wigbell::cmd_oracle(oracle_seed, oracle_cases, std::cout);
        if (audit->parsed()) return wigbell::cmd_lhv_audit(audit_spec, std::cout);
    } catch (const wigbell::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
