#include "wigbell/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace wigbell {

std::vector<double> tau_grid(double tau_min, double tau_max, double tau_step) {
    if (!std::isfinite(tau_min) || !std::isfinite(tau_max) ||
        !std::isfinite(tau_step) || !(tau_step > 0.0) || !(tau_min <= tau_max))
        throw std::invalid_argument(
            "tau_grid: need tau_step > 0 and tau_min <= tau_max");
    const auto n = static_cast<std::size_t>(
                       std::floor((tau_max - tau_min) / tau_step + 1e-9)) +
                   1;
    std::vector<double> grid;
    grid.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        grid.push_back(tau_min + static_cast<double>(i) * tau_step);
    return grid;
}

std::string fmt_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

bool write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) return false;
    os << content;
    os.flush();
    return os.good();
}

std::string strip_known_ext(std::string path) {
    for (const char* ext : {".csv", ".svg"}) {
        const std::string e = ext;
        if (path.size() > e.size() &&
            path.compare(path.size() - e.size(), e.size(), e) == 0)
            return path.substr(0, path.size() - e.size());
    }
    return path;
}

std::string base_path(const ScanSpec& spec, const char* fallback) {
    return strip_known_ext(spec.output_path.empty() ? fallback
                                                    : spec.output_path);
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double mult = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return mult * mag;
}

std::string fmt_tick(double v) {
    if (std::abs(v) < 1e-300) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e"};

const char* verdict_name(AuditVerdict v) {
    switch (v) {
        case AuditVerdict::vacuous: return "vacuous";
        case AuditVerdict::consistent: return "consistent";
        default: return "violation";
    }
}

}  // namespace

bool write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series) {
    const double w = 800, h = 500, ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = w - ml - mr, ph = h - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmin <= xmax)) { xmin = 0.0; xmax = 1.0; }
    if (!(ymin <= ymax)) { ymin = 0.0; ymax = 1.0; }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    } else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
    }

    auto tx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto ty = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
           "height=\"500\" viewBox=\"0 0 800 500\" font-family=\"sans-serif\" "
           "font-size=\"12\">\n";
    svg += "<rect width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";

    const double xstep = nice_step(xmax - xmin, 6);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep;
         t += xstep) {
        const std::string px = fmt_coord(tx(t));
        svg += "<line x1=\"" + px + "\" y1=\"" + fmt_coord(mt) + "\" x2=\"" +
               px + "\" y2=\"" + fmt_coord(mt + ph) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + px + "\" y=\"" + fmt_coord(mt + ph + 16) +
               "\" text-anchor=\"middle\">" + fmt_tick(t) + "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin, 6);
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep;
         t += ystep) {
        const std::string py = fmt_coord(ty(t));
        svg += "<line x1=\"" + fmt_coord(ml) + "\" y1=\"" + py + "\" x2=\"" +
               fmt_coord(ml + pw) + "\" y2=\"" + py +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt_coord(ml - 6) + "\" y=\"" +
               fmt_coord(ty(t) + 4) + "\" text-anchor=\"end\">" + fmt_tick(t) +
               "</text>\n";
    }
    if (ymin < 0.0 && ymax > 0.0) {
        const std::string py = fmt_coord(ty(0.0));
        svg += "<line x1=\"" + fmt_coord(ml) + "\" y1=\"" + py + "\" x2=\"" +
               fmt_coord(ml + pw) + "\" y2=\"" + py +
               "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    }
    svg += "<rect x=\"" + fmt_coord(ml) + "\" y=\"" + fmt_coord(mt) +
           "\" width=\"" + fmt_coord(pw) + "\" height=\"" + fmt_coord(ph) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].points.empty()) continue;
        svg += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"";
        svg += kPalette[i % 5];
        svg += "\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            svg += fmt_coord(tx(x));
            svg += ",";
            svg += fmt_coord(ty(y));
            svg += " ";
        }
        svg += "\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const double ly = mt + 14 + 16 * static_cast<double>(i);
        svg += "<line x1=\"" + fmt_coord(ml + pw - 120) + "\" y1=\"" +
               fmt_coord(ly - 4) + "\" x2=\"" + fmt_coord(ml + pw - 96) +
               "\" y2=\"" + fmt_coord(ly - 4) + "\" stroke-width=\"1.5\" stroke=\"" +
               kPalette[i % 5] + "\"/>\n";
        svg += "<text x=\"" + fmt_coord(ml + pw - 90) + "\" y=\"" +
               fmt_coord(ly) + "\">" + xml_escape(series[i].label) +
               "</text>\n";
    }

    svg += "<text x=\"" + fmt_coord(ml + pw / 2) + "\" y=\"22\" "
           "text-anchor=\"middle\" font-size=\"15\">" +
           xml_escape(title) + "</text>\n";
    svg += "<text x=\"" + fmt_coord(ml + pw / 2) + "\" y=\"" +
           fmt_coord(h - 12) + "\" text-anchor=\"middle\">" +
           xml_escape(xlabel) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt_coord(mt + ph / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt_coord(mt + ph / 2) + ")\">" + xml_escape(ylabel) + "</text>\n";
    svg += "</svg>\n";
    return write_text_file(path, svg);
}

namespace {

// returns 0 on success, 2 when a file could not be written
int emit_outputs(const ScanSpec& spec, const std::string& base,
                 const std::string& csv, const std::string& title,
                 const std::string& ylabel,
                 const std::vector<PlotSeries>& series, std::ostream& log) {
    if (spec.format != OutputFormat::svg) {
        if (!write_text_file(base + ".csv", csv)) {
            log << "error: cannot write " << base << ".csv\n";
            return 2;
        }
        log << "wrote " << base << ".csv\n";
    }
    if (spec.format != OutputFormat::csv) {
        if (!write_svg_plot(base + ".svg", title, "tau", ylabel, series)) {
            log << "error: cannot write " << base << ".svg\n";
            return 2;
        }
        log << "wrote " << base << ".svg\n";
    }
    return 0;
}

std::vector<double> s_values_or(const ScanSpec& spec,
                                std::initializer_list<double> fallback) {
    std::vector<double> ss =
        spec.s_values.empty() ? std::vector<double>(fallback) : spec.s_values;
    for (double s : ss)
        if (!std::isfinite(s) || !(s > 0.0))
            throw std::domain_error("s values must be > 0");
    return ss;
}

}  // namespace

int cmd_fig1(const ScanSpec& spec, std::ostream& log) {
    try {
        const auto grid = tau_grid(spec.tau_min, spec.tau_max, spec.tau_step);
        std::string csv = "tau,F,F3,S\n";
        PlotSeries s_over_k{"S/K", {}};
        double min_s = std::numeric_limits<double>::infinity();
        double min_tau = 0.0;
        for (double tau : grid) {
            const double f = F_closed(tau, spec.delta);
            const double f3 = F_closed(3.0 * tau, spec.delta);
            const double s = (3.0 * f - f3) / spec.delta.K;
            csv += fmt_g12(tau) + "," + fmt_g12(f) + "," + fmt_g12(f3) + "," +
                   fmt_g12(s) + "\n";
            s_over_k.points.emplace_back(tau, s);
            if (s < min_s) {
                min_s = s;
                min_tau = tau;
            }
        }
        log << "fig1: " << grid.size() << " rows, min S/K = " << fmt_g12(min_s)
            << " at tau = " << fmt_g12(min_tau) << "\n";
        return emit_outputs(spec, base_path(spec, "fig1"), csv,
                            "Delta-limit sign correlation", "S/K", {s_over_k},
                            log);
    } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_finite_s(const ScanSpec& spec, std::ostream& log) {
    try {
        const auto ss = s_values_or(spec, {0.5, 0.1, 0.02});
        const auto grid = tau_grid(spec.tau_min, spec.tau_max, spec.tau_step);
        std::string csv = "s,tau,F_fin,S_fin,K_eff\n";
        std::vector<PlotSeries> series;
        for (double s : ss) {
            const ModePairParams mp{spec.delta.q0, spec.delta.p0, s};
            PlotSeries ps{"s=" + fmt_g12(s), {}};
            double min_s_fin = std::numeric_limits<double>::infinity();
            double min_tau = 0.0;
            for (double tau : grid) {
                const auto f1 = F_finite_s({tau, tau}, mp);
                const auto f3 = F_finite_s({3.0 * tau, 3.0 * tau}, mp);
                const double s_fin = 3.0 * f1.value - f3.value;
                const double den = F_closed(
                    tau, DeltaLimitParams{spec.delta.q0, spec.delta.p0, 1.0});
                if (!(den > 1e-250))
                    throw std::domain_error("finite-s: closed form vanishes");
                const double k_eff = f1.value / den;
                csv += fmt_g12(s) + "," + fmt_g12(tau) + "," +
                       fmt_g12(f1.value) + "," + fmt_g12(s_fin) + "," +
                       fmt_g12(k_eff) + "\n";
                ps.points.emplace_back(tau, s_fin);
                if (s_fin < min_s_fin) {
                    min_s_fin = s_fin;
                    min_tau = tau;
                }
            }
            log << "finite-s: s = " << fmt_g12(s)
                << ", min S_fin = " << fmt_g12(min_s_fin)
                << " at tau = " << fmt_g12(min_tau) << "\n";
            series.push_back(std::move(ps));
        }
        return emit_outputs(spec, base_path(spec, "finite_s"), csv,
                            "Finite-s sign correlation", "S_fin", series, log);
    } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
}

std::vector<ClosedFormCase> closed_form_oracle_cases(std::uint64_t seed,
                                                     std::uint64_t n_cases) {
    RngStream stream{seed, 0, 0};
    std::vector<ClosedFormCase> cases;
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-11;
    for (std::uint64_t i = 0; i < n_cases; ++i) {
        ClosedFormCase c;
        c.params.q0 = -3.0 + 6.0 * stream.next_uniform();
        c.params.p0 = -3.0 + 6.0 * stream.next_uniform();
        c.params.K = 0.5 + 1.5 * stream.next_uniform();
        c.tau = 5.0 * stream.next_uniform();
        c.closed = F_closed(c.tau, c.params);

        // F = 2 int_0^inf q (w(q) + w(-q)) dq, truncated at 12 sigma
        const double center = c.params.q0 + c.params.p0 * c.tau;
        const double sigma = std::sqrt((1.0 + c.tau * c.tau) / 2.0);
        const double upper = std::abs(center) + 12.0 * sigma;
        auto f = [&](double q) {
            return q * (w_closed(q, c.tau, c.params) +
                        w_closed(-q, c.tau, c.params));
        };
        const double split = std::clamp(std::abs(center), 1e-3, upper - 1e-3);
        const auto r1 = integrate_1d(f, 0.0, split, opts);
        const auto r2 = integrate_1d(f, split, upper, opts);
        c.quad = 2.0 * (r1.value + r2.value);
        c.rel_err = std::abs(c.closed - c.quad) /
                    std::max(std::abs(c.closed), 1e-300);
        cases.push_back(c);
    }
    return cases;
}

std::vector<McOracleCase> mc_oracle_cases(std::uint64_t seed,
                                          std::uint64_t n_cases,
                                          std::uint64_t n_samples) {
    RngStream stream{seed, 1, 0};
    std::vector<McOracleCase> cases;
    for (std::uint64_t i = 0; i < n_cases; ++i) {
        McOracleCase c;
        // redraw until the quadrature value is away from 0 and 1, so the
        // binomial standard error is a meaningful yardstick
        for (int attempt = 0; attempt < 200; ++attempt) {
            c.params.q0 = -2.0 + 4.0 * stream.next_uniform();
            c.params.p0 = -2.0 + 4.0 * stream.next_uniform();
            c.params.s = 0.2 + 1.3 * stream.next_uniform();
            c.t.t1 = 3.0 * stream.next_uniform();
            c.t.t2 = 3.0 * stream.next_uniform();
            c.quad = F_finite_s(c.t, c.params).value;
            if (c.quad >= 0.01 && c.quad <= 0.99) break;
        }
        McConfig mc{n_samples, seed * 1000 + i + 7, 4};
        c.mc = estimate_D(c.params, c.t, mc);
        cases.push_back(c);
    }
    return cases;
}

int cmd_oracle(std::uint64_t seed, std::uint64_t n_cases, std::ostream& log) {
    try {
        bool ok = true;
        const auto closed = closed_form_oracle_cases(seed, n_cases);
        double max_rel = 0.0;
        for (std::size_t i = 0; i < closed.size(); ++i) {
            const auto& c = closed[i];
            const bool pass = c.rel_err <= 1e-8;
            ok = ok && pass;
            max_rel = std::max(max_rel, c.rel_err);
            log << "closed-form case " << i << ": q0=" << fmt_g12(c.params.q0)
                << " p0=" << fmt_g12(c.params.p0) << " K=" << fmt_g12(c.params.K)
                << " tau=" << fmt_g12(c.tau) << " closed=" << fmt_g12(c.closed)
                << " quad=" << fmt_g12(c.quad)
                << " rel_err=" << fmt_g12(c.rel_err)
                << (pass ? " ok" : " FAIL") << "\n";
        }
        log << "closed-form cases: " << closed.size()
            << ", max rel_err = " << fmt_g12(max_rel) << "\n";

        const auto mcs =
            mc_oracle_cases(seed, std::min<std::uint64_t>(n_cases, 20), 1000000);
        for (std::size_t i = 0; i < mcs.size(); ++i) {
            const auto& c = mcs[i];
            const double diff = std::abs(c.mc.mean - c.quad);
            const bool pass = diff <= 4.0 * c.mc.std_error;
            ok = ok && pass;
            log << "mc case " << i << ": q0=" << fmt_g12(c.params.q0)
                << " p0=" << fmt_g12(c.params.p0) << " s=" << fmt_g12(c.params.s)
                << " t1=" << fmt_g12(c.t.t1) << " t2=" << fmt_g12(c.t.t2)
                << " quad=" << fmt_g12(c.quad) << " mc=" << fmt_g12(c.mc.mean)
                << " diff/se=" << fmt_g12(c.mc.std_error > 0.0
                                              ? diff / c.mc.std_error
                                              : 0.0)
                << (pass ? " ok" : " FAIL") << "\n";
        }
        log << "mc cases: " << mcs.size() << "\n";
        log << (ok ? "oracle: all cases within tolerance\n"
                   : "oracle: FAILURES above tolerance\n");
        return ok ? 0 : 3;
    } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_lhv_audit(const ScanSpec& spec, std::ostream& log) {
    try {
        const auto ss = s_values_or(spec, {0.1});
        const auto grid = tau_grid(spec.tau_min, spec.tau_max, spec.tau_step);
        std::string csv = "s,tau,S_mc,std_error,flagged\n";
        std::vector<PlotSeries> series;
        int total_flags = 0;
        for (double s : ss) {
            const ModePairParams mp{spec.delta.q0, spec.delta.p0, s};
            const auto report = lhv_audit(mp, grid, spec.mc);
            PlotSeries ps{"s=" + fmt_g12(s), {}};
            for (const auto& row : report.rows) {
                csv += fmt_g12(s) + "," + fmt_g12(row.tau) + "," +
                       fmt_g12(row.estimate.mean) + "," +
                       fmt_g12(row.estimate.std_error) + "," +
                       (row.flagged ? "1" : "0") + "\n";
                ps.points.emplace_back(row.tau, row.estimate.mean);
            }
            total_flags += report.flag_count;
            log << "lhv-audit: s = " << fmt_g12(s) << ", " << report.flag_count
                << "/" << report.rows.size() << " points flagged, verdict "
                << verdict_name(report.verdict) << "\n";
            series.push_back(std::move(ps));
        }
        const int rc = emit_outputs(spec, base_path(spec, "lhv_audit"), csv,
                                    "Classical-ensemble audit", "S_mc", series,
                                    log);
        if (rc != 0) return rc;
        return total_flags > 0 ? 3 : 0;
    } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wigbell
