#include "report/figures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "report/svg.hpp"
#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/quadrature.hpp"
#include "rfsqueeze/trace_io.hpp"

namespace rfs::report {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Emitter {
    fs::path dir;
    std::vector<std::string> files;

    explicit Emitter(const fs::path& d) : dir(d) { fs::create_directories(dir); }

    std::ofstream open(const std::string& name) {
        files.push_back(name);
        fs::create_directories((dir / name).parent_path());
        return std::ofstream(dir / name, std::ios::binary);
    }

    void write_text(const std::string& name, const std::string& text) {
        auto os = open(name);
        os << text;
    }

    void manifest(const RunConfig& cfg, const std::string& command, json extra = {}) {
        json m;
        m["command"] = command;
        m["version"] = kVersion;
        m["seed"] = cfg.output.seed;
        char hash[20];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(cfg.config_hash()));
        m["config_hash"] = hash;
        m["config"] = json::parse(cfg.canonical_json());
        m["files"] = files;
        if (!extra.is_null() && !extra.empty()) m["notes"] = extra;
        auto os = open("manifest.json");
        os << m.dump(2) << '\n';
    }
};

SystemParams params_at(const RunConfig& cfg, double s) {
    SystemParams p = cfg.system;
    p.rabi = rabi_from_saturation(s, p.gamma);
    return p;
}

std::string s_tag(double s) {
    std::ostringstream os;
    os << "s" << s;
    std::string t = os.str();
    for (auto& c : t)
        if (c == '.') c = 'p';
    for (auto& c : t)
        if (c == '+') c = '_';
    return t;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * (n > 1 ? double(i) / (n - 1) : 0.0);
    return g;
}

std::vector<double> full_period_grid(int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = 2.0 * M_PI * i / n;
    return g;
}

std::vector<double> tau_grid_of(const RunConfig& cfg) {
    return default_tau_grid(cfg.system.gamma, cfg.sweep.tau_points,
                            cfg.sweep.tau_span_over_gamma);
}

void maybe_svg(Emitter& em, const RunConfig& cfg, const std::string& name, SvgPlot& plot) {
    if (cfg.output.svg) em.write_text(name, plot.render());
}

std::vector<std::string> fig1b(const RunConfig& cfg, Emitter& em) {
    const double target = cfg.fringe_visibility.value_or(0.738);
    const double v = visibility_for_fringe(cfg.system, cfg.lo, target);
    const auto phi = linspace(0.0, 4.0 * M_PI, 401);
    std::vector<double> intensity(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        intensity[i] = sl_intensity(cfg.system, {cfg.lo.amplitude, phi[i]}, v);

    {
        auto os = em.open("fringe.csv");
        os << "phi_rad,intensity_flux\n";
        for (std::size_t i = 0; i < phi.size(); ++i)
            os << format_double(phi[i]) << ',' << format_double(intensity[i]) << '\n';
    }
    SvgPlot plot("SL-field fringe", "interferometer phase (rad)", "intensity (flux units)");
    plot.add_line(phi, intensity, "#1f77b4");
    maybe_svg(em, cfg, "fig1b.svg", plot);
    em.manifest(cfg, "reproduce fig1b",
                json{{"fringe_visibility", fringe_visibility(cfg.system, cfg.lo, v)},
                     {"visibility_multiplier", v}});
    return em.files;
}

std::vector<std::string> fig1c(const RunConfig& cfg, Emitter& em) {
    const double span = cfg.sweep.detuning_span_over_gamma * cfg.system.gamma;
    const auto detuning = linspace(-span, span, cfg.sweep.detuning_points);
    std::vector<double> phase(detuning.size()), x(detuning.size());
    for (std::size_t i = 0; i < detuning.size(); ++i) {
        SystemParams p = cfg.system;
        p.detuning = detuning[i];
        phase[i] = dipole_phase(p);
        x[i] = detuning[i] / cfg.system.gamma;
    }
    {
        auto os = em.open("dipole_phase.csv");
        os << "detuning_over_gamma,dipole_phase_rad\n";
        for (std::size_t i = 0; i < x.size(); ++i)
            os << format_double(x[i]) << ',' << format_double(phase[i]) << '\n';
    }
    SvgPlot plot("Dipole phase vs detuning", "detuning / gamma", "phase (rad)");
    plot.add_line(x, phase, "#1f77b4");
    maybe_svg(em, cfg, "fig1c.svg", plot);
    em.manifest(cfg, "reproduce fig1c");
    return em.files;
}

std::vector<std::string> fig1d(const RunConfig& cfg, Emitter& em) {
    const auto tau = tau_grid_of(cfg);
    const auto ideal = g2_rf(cfg.system, tau);
    {
        auto os = em.open("g2_rf.csv");
        trace_to_csv(os, ideal);
    }
    SvgPlot plot("RF intensity autocorrelation", "tau (s)", "g2");
    plot.add_line(tau, ideal.real_values(), "#d62728", "ideal");
    if (cfg.instrument && cfg.instrument->irf_fwhm > 0.0) {
        const auto conv = convolve_irf(ideal, *cfg.instrument);
        auto os = em.open("g2_rf_irf.csv");
        trace_to_csv(os, conv);
        plot.add_line(tau, conv.real_values(), "#222222", "with IRF");
    }
    maybe_svg(em, cfg, "fig1d.svg", plot);
    em.manifest(cfg, "reproduce fig1d");
    return em.files;
}

std::vector<std::string> fig1e(const RunConfig& cfg, Emitter& em) {
    const auto tau = tau_grid_of(cfg);
    SvgPlot plot("SL intensity autocorrelation", "tau (s)", "G2 (flux^2)");
    const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4"};
    int c = 0;
    for (double phi : {0.0, M_PI / 2, M_PI}) {
        const LoConfig lo{cfg.lo.amplitude, phi};
        auto trace = g2_total(cfg.system, lo, tau);
        if (cfg.instrument && cfg.instrument->irf_fwhm > 0.0)
            trace = convolve_irf(trace, *cfg.instrument);
        std::ostringstream name;
        name << "g2_total_phi" << static_cast<int>(std::round(phi * 180.0 / M_PI)) << ".csv";
        auto os = em.open(name.str());
        trace_to_csv(os, trace);
        plot.add_line(tau, trace.real_values(), colors[c],
                      "phi=" + std::to_string(static_cast<int>(std::round(phi * 180 / M_PI))));
        ++c;
    }
    maybe_svg(em, cfg, "fig1e.svg", plot);
    em.manifest(cfg, "reproduce fig1e");
    return em.files;
}

std::vector<std::string> fig2a(const RunConfig& cfg, Emitter& em) {
    const auto tau = tau_grid_of(cfg);
    SvgPlot plot("Quadrature fluctuation autocorrelations", "tau (s)", "<:dX(0)dX(tau):>");
    const char* colors[] = {"#ff7f0e", "#1f77b4", "#d62728", "#2ca02c"};
    int c = 0;
    for (double s : {3.0, 0.1}) {
        for (double phi : {0.0, M_PI / 2}) {
            const auto trace =
                quadrature_fluctuation_autocorrelation(params_at(cfg, s), phi, tau);
            std::ostringstream name;
            name << "autocorr_" << s_tag(s) << "_phi"
                 << static_cast<int>(std::round(phi * 180.0 / M_PI)) << ".csv";
            auto os = em.open(name.str());
            trace_to_csv(os, trace);
            plot.add_line(tau, trace.real_values(), colors[c % 4],
                          s_tag(s) + (phi == 0.0 ? " in-phase" : " out-of-phase"));
            ++c;
        }
    }
    maybe_svg(em, cfg, "fig2a.svg", plot);
    em.manifest(cfg, "reproduce fig2a");
    return em.files;
}

std::vector<std::string> fig2b(const RunConfig& cfg, Emitter& em) {
    const auto phi = full_period_grid(cfg.sweep.phi_points);
    SvgPlot plot("Quadrature variance vs phase", "phi (rad)", "normally ordered variance");
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
    int c = 0;
    for (double s : cfg.sweep.phase_panel_s) {
        const auto scan = variance_phase_scan(params_at(cfg, s), phi);
        {
            auto os = em.open("variance_phase_" + s_tag(s) + ".csv");
            scan_to_csv(os, scan);
        }
        plot.add_line(phi, scan.variance, colors[c % 5], s_tag(s));
        if (cfg.instrument) {
            QuadratureScan degraded = scan;
            for (std::size_t i = 0; i < phi.size(); ++i)
                degraded.variance[i] =
                    degraded_variance(params_at(cfg, s), phi[i], *cfg.instrument);
            auto os = em.open("variance_phase_" + s_tag(s) + "_degraded.csv");
            scan_to_csv(os, degraded);
        }
        ++c;
    }
    const auto reference = variance_phase_scan(cfg.system, phi, true);
    {
        auto os = em.open("coherent_reference.csv");
        scan_to_csv(os, reference);
    }
    plot.add_line(phi, reference.variance, "#7f7f7f", "coherent reference");
    maybe_svg(em, cfg, "fig2b.svg", plot);
    em.manifest(cfg, "reproduce fig2b");
    return em.files;
}

std::vector<std::string> fig3a(const RunConfig& cfg, Emitter& em) {
    const auto [in_phase, out_of_phase] = variance_power_scan(cfg.system, cfg.sweep.s_grid);
    {
        auto os = em.open("ideal.csv");
        os << "s,n_phi0,n_phi90\n";
        for (std::size_t i = 0; i < cfg.sweep.s_grid.size(); ++i)
            os << format_double(cfg.sweep.s_grid[i]) << ','
               << format_double(in_phase.variance[i]) << ','
               << format_double(out_of_phase.variance[i]) << '\n';
    }

    std::size_t argmin = 0;
    for (std::size_t i = 0; i < in_phase.variance.size(); ++i)
        if (in_phase.variance[i] < in_phase.variance[argmin]) argmin = i;

    SvgPlot plot("Quadrature variance vs excitation power", "s", "normally ordered variance");
    plot.add_line(cfg.sweep.s_grid, in_phase.variance, "#1f77b4", "phi=0 ideal");
    plot.add_line(cfg.sweep.s_grid, out_of_phase.variance, "#d62728", "phi=90 ideal");

    if (cfg.instrument) {
        std::vector<double> d0, d90;
        for (double s : cfg.sweep.s_grid) {
            d0.push_back(degraded_variance(params_at(cfg, s), 0.0, *cfg.instrument));
            d90.push_back(degraded_variance(params_at(cfg, s), M_PI / 2, *cfg.instrument));
        }
        auto os = em.open("degraded.csv");
        os << "s,n_phi0_degraded,n_phi90_degraded\n";
        for (std::size_t i = 0; i < cfg.sweep.s_grid.size(); ++i)
            os << format_double(cfg.sweep.s_grid[i]) << ',' << format_double(d0[i]) << ','
               << format_double(d90[i]) << '\n';
        plot.add_line(cfg.sweep.s_grid, d0, "#17becf", "phi=0 degraded");
        plot.add_line(cfg.sweep.s_grid, d90, "#e377c2", "phi=90 degraded");
    }
    maybe_svg(em, cfg, "fig3a.svg", plot);
    em.manifest(cfg, "reproduce fig3a",
                json{{"ideal_minimum_s", cfg.sweep.s_grid[argmin]},
                     {"ideal_minimum_variance", in_phase.variance[argmin]},
                     {"known_discrepancy",
                      "ideal optimum sits at s = 1/3; the source experiment quotes s = 0.36"}});
    return em.files;
}

std::vector<std::string> fig3b(const RunConfig& cfg, Emitter& em) {
    for (double s : cfg.sweep.wigner_panel_s) {
        const auto ss = steady_state(build_liouvillian(params_at(cfg, s)));
        const auto state = field_state_from_atom(ss).dipole_aligned();
        const auto grid = wigner(state);
        const auto contours = half_max_contour(grid);
        const std::string tag = s_tag(s);
        {
            auto os = em.open("wigner_" + tag + ".csv");
            wigner_to_csv(os, grid);
        }
        {
            auto os = em.open("wigner_" + tag + ".bin");
            wigner_to_binary(os, grid);
        }
        {
            auto os = em.open("contour_" + tag + ".csv");
            contours_to_csv(os, contours);
        }
        if (cfg.output.svg) {
            SvgPlot plot("Wigner function, " + tag, "x1", "x2");
            plot.set_range(-2.0, 2.0, -2.0, 2.0);
            plot.add_heatmap(grid.x1_axis, grid.x2_axis, grid.values);
            for (const auto& loop : contours) {
                std::vector<double> cx, cy;
                for (const auto& pt : loop) {
                    cx.push_back(pt[0]);
                    cy.push_back(pt[1]);
                }
                plot.add_line(cx, cy, "#000000");
            }
            em.write_text("fig3b_" + tag + ".svg", plot.render());
        }
    }
    em.manifest(cfg, "reproduce fig3b",
                json{{"normalization", "W integrates to 1; per-panel color scale is max(|W|)"},
                     {"infinity_proxy", "the s -> infinity panel uses s = 1e6"}});
    return em.files;
}

}  // namespace

std::optional<FigureId> figure_from_name(const std::string& name) {
    if (name == "fig1b") return FigureId::fig1b;
    if (name == "fig1c") return FigureId::fig1c;
    if (name == "fig1d") return FigureId::fig1d;
    if (name == "fig1e") return FigureId::fig1e;
    if (name == "fig2a") return FigureId::fig2a;
    if (name == "fig2b") return FigureId::fig2b;
    if (name == "fig3a") return FigureId::fig3a;
    if (name == "fig3b") return FigureId::fig3b;
    return std::nullopt;
}

const char* figure_name(FigureId id) {
    switch (id) {
        case FigureId::fig1b: return "fig1b";
        case FigureId::fig1c: return "fig1c";
        case FigureId::fig1d: return "fig1d";
        case FigureId::fig1e: return "fig1e";
        case FigureId::fig2a: return "fig2a";
        case FigureId::fig2b: return "fig2b";
        case FigureId::fig3a: return "fig3a";
        case FigureId::fig3b: return "fig3b";
    }
    return "unknown";
}

std::vector<std::string> reproduce(FigureId figure, const RunConfig& cfg) {
    Emitter em(fs::path(cfg.output.dir) / figure_name(figure));
    switch (figure) {
        case FigureId::fig1b: return fig1b(cfg, em);
        case FigureId::fig1c: return fig1c(cfg, em);
        case FigureId::fig1d: return fig1d(cfg, em);
        case FigureId::fig1e: return fig1e(cfg, em);
        case FigureId::fig2a: return fig2a(cfg, em);
        case FigureId::fig2b: return fig2b(cfg, em);
        case FigureId::fig3a: return fig3a(cfg, em);
        case FigureId::fig3b: return fig3b(cfg, em);
    }
    throw config_error("unknown figure id");
}

std::vector<std::string> run_campaign(const RunConfig& cfg) {
    if (!cfg.instrument)
        throw config_error("campaign requires an \"instrument\" configuration block");
    Emitter em(fs::path(cfg.output.dir) / "campaign");

    auto result = simulate_campaign(cfg.system, cfg.lo, *cfg.instrument, cfg.sweep.duration_s,
                                    cfg.output.seed);
    result = phase_bin(result, cfg.sweep.phase_bins);
    if (cfg.postselect) result = postselect(result, *cfg.postselect);

    {
        auto os = em.open("fringe_reference.csv");
        fringe_to_csv(os, result.fringe);
    }
    {
        auto os = em.open("intervals.csv");
        intervals_to_csv(os, result);
    }
    for (std::size_t i = 0; i < result.intervals.size(); ++i) {
        char name[48];
        std::snprintf(name, sizeof(name), "histograms/hist_%05zu.csv", i);
        auto os = em.open(name);
        histogram_to_csv(os, result, i);
    }
    for (std::size_t j = 0; j < result.binned.size(); ++j) {
        char name[32];
        std::snprintf(name, sizeof(name), "binned/bin_%02zu.csv", j);
        auto os = em.open(name);
        binned_to_csv(os, result, j);
    }
    {
        auto os = em.open("estimates.csv");
        estimates_to_csv(os, result);
    }
    em.manifest(cfg, "campaign",
                json{{"accepted_intervals", result.accepted_count()},
                     {"total_intervals", result.intervals.size()},
                     {"total_coincidences", result.total_coincidences()},
                     {"in_phase_bin_estimate", result.binned.front().variance_estimate},
                     {"in_phase_bin_bootstrap_sigma",
                      result.binned.front().variance_bootstrap_sigma}});
    return em.files;
}

std::vector<std::string> run_sweep(const RunConfig& cfg) {
    Emitter em(fs::path(cfg.output.dir) / "sweep");
    {
        auto os = em.open("sweep_power.csv");
        os << "s,rho_ee,coherence_abs,n_phi0,n_phi90,heisenberg_product\n";
        for (double s : cfg.sweep.s_grid) {
            const auto p = params_at(cfg, s);
            const auto ss = steady_state(build_liouvillian(p));
            const double n0 = normally_ordered_variance(p, 0.0).normally_ordered_variance;
            const double n90 =
                normally_ordered_variance(p, M_PI / 2).normally_ordered_variance;
            os << format_double(s) << ',' << format_double(ss.rho_ee) << ','
               << format_double(std::abs(ss.sigma_minus_expectation())) << ','
               << format_double(n0) << ',' << format_double(n90) << ','
               << format_double(heisenberg_product(p)) << '\n';
        }
    }
    {
        const double span = cfg.sweep.detuning_span_over_gamma * cfg.system.gamma;
        const auto detuning = linspace(-span, span, cfg.sweep.detuning_points);
        auto os = em.open("sweep_detuning.csv");
        os << "detuning_over_gamma,dipole_phase_rad,n_phi0,effective_s\n";
        for (double d : detuning) {
            SystemParams p = cfg.system;
            p.detuning = d;
            os << format_double(d / cfg.system.gamma) << ','
               << format_double(dipole_phase(p)) << ','
               << format_double(normally_ordered_variance(p, 0.0).normally_ordered_variance)
               << ',' << format_double(p.effective_saturation()) << '\n';
        }
    }
    em.manifest(cfg, "sweep");
    return em.files;
}

std::vector<std::string> run_calibrate(const RunConfig& cfg) {
    if (!cfg.instrument)
        throw config_error("calibrate requires an \"instrument\" configuration block (the pinned model)");
    Emitter em(fs::path(cfg.output.dir) / "calibrate");

    const auto p = params_at(cfg, cfg.calibrate.at_s);
    const auto cal = calibrate_imperfections(p, cfg.calibrate.target_variance,
                                             cfg.calibrate.free_parameter, *cfg.instrument,
                                             cfg.sweep.s_grid);
    {
        auto os = em.open("degraded_curve.csv");
        os << "s,n_phi0_degraded,n_phi90_degraded\n";
        for (std::size_t i = 0; i < cal.s_grid.size(); ++i)
            os << format_double(cal.s_grid[i]) << ','
               << format_double(cal.degraded_in_phase[i]) << ','
               << format_double(cal.degraded_out_of_phase[i]) << '\n';
    }
    {
        json model = {{"irf_fwhm_ps", cal.model.irf_fwhm * 1e12},
                      {"phase_jitter_sigma_rad", cal.model.phase_jitter_sigma},
                      {"wandering_sigma_over_gamma",
                       cal.model.wandering_sigma / cfg.system.gamma},
                      {"achieved_variance", cal.achieved},
                      {"target_variance", cfg.calibrate.target_variance},
                      {"at_s", cfg.calibrate.at_s}};
        auto os = em.open("calibrated_model.json");
        os << model.dump(2) << '\n';
    }
    em.manifest(cfg, "calibrate",
                json{{"achieved_variance", cal.achieved},
                     {"free_parameter", cfg.calibrate.free_parameter ==
                                                CalibrationFree::phase_jitter
                                            ? "phase_jitter"
                                            : "irf_fwhm"}});
    return em.files;
}

}  // namespace rfs::report
