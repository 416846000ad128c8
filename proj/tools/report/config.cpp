#include "report/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rfsqueeze/errors.hpp"

namespace rfs::report {

using nlohmann::json;

namespace {

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct Problems {
    std::vector<std::string> list;
    void add(const std::string& p) { list.push_back(p); }
    void raise_if_any(const std::string& origin) const {
        if (list.empty()) return;
        std::string msg = "invalid configuration (" + origin + "):";
        for (const auto& p : list) msg += "\n  - " + p;
        throw config_error(msg);
    }
};

void check_keys(const json& obj, const std::string& where,
                const std::vector<std::string>& allowed, Problems& problems) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        std::string best;
        int best_d = 4;
        for (const auto& cand : allowed) {
            const int d = edit_distance(key, cand);
            if (d < best_d) {
                best_d = d;
                best = cand;
            }
        }
        std::string msg = where + ": unknown key \"" + key + "\"";
        if (!best.empty()) msg += " (did you mean \"" + best + "\"?)";
        problems.add(msg);
    }
}

double get_num(const json& obj, const std::string& key, double fallback, Problems& problems,
               const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        problems.add(where + "." + key + " must be a number");
        return fallback;
    }
    return obj[key].get<double>();
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, n > 1 ? double(i) / (n - 1) : 0.0);
    return g;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error (") + origin + "): " + e.what());
    }
    if (!root.is_object()) throw config_error("config root must be a JSON object");

    Problems problems;
    RunConfig cfg;
    check_keys(root, "config",
               {"system", "lo", "instrument", "postselect", "sweep", "calibrate", "output"},
               problems);

    // --- system ---------------------------------------------------------
    double lifetime_ns = 0.58;
    double s_value = 0.1;
    bool s_given = false, rabi_given = false;
    double rabi_over_gamma = 0.0;
    double gamma_per_s = 0.0;
    if (root.contains("system")) {
        const auto& sys = root["system"];
        check_keys(sys, "system",
                   {"lifetime_ns", "gamma_per_s", "s", "power", "rabi_over_gamma",
                    "detuning_over_gamma", "dephasing_over_gamma"},
                   problems);
        lifetime_ns = get_num(sys, "lifetime_ns", lifetime_ns, problems, "system");
        gamma_per_s = get_num(sys, "gamma_per_s", 0.0, problems, "system");
        if (sys.contains("s") && sys.contains("power"))
            problems.add("system: give either \"s\" or \"power\", not both");
        if (sys.contains("s") || sys.contains("power")) {
            s_given = true;
            s_value = get_num(sys, sys.contains("s") ? "s" : "power", s_value, problems,
                              "system");
        }
        if (sys.contains("rabi_over_gamma")) {
            rabi_given = true;
            rabi_over_gamma = get_num(sys, "rabi_over_gamma", 0.0, problems, "system");
        }
        cfg.system.detuning = get_num(sys, "detuning_over_gamma", 0.0, problems, "system");
        cfg.system.dephasing = get_num(sys, "dephasing_over_gamma", 0.0, problems, "system");
    }
    if (s_given && rabi_given)
        problems.add("system: give either a saturation (\"s\") or \"rabi_over_gamma\", not both");
    if (!(lifetime_ns > 0.0)) problems.add("system.lifetime_ns must be > 0");
    const double gamma = gamma_per_s > 0.0 ? gamma_per_s : 1.0 / (lifetime_ns * 1e-9);
    cfg.system.gamma = gamma;
    cfg.system.detuning *= gamma;
    cfg.system.dephasing *= gamma;
    if (s_value < 0.0) problems.add("system.s must be >= 0");
    if (rabi_over_gamma < 0.0) problems.add("system.rabi_over_gamma must be >= 0");
    cfg.system.rabi = rabi_given ? rabi_over_gamma * gamma
                                 : gamma * std::sqrt(0.5 * std::max(s_value, 0.0));

    // --- lo ---------------------------------------------------------------
    bool matched = true;
    double beta2 = 0.0;
    if (root.contains("lo")) {
        const auto& lo = root["lo"];
        check_keys(lo, "lo", {"matched", "beta2", "phase_rad", "fringe_visibility"}, problems);
        if (lo.contains("matched")) {
            if (!lo["matched"].is_boolean())
                problems.add("lo.matched must be a boolean");
            else
                matched = lo["matched"].get<bool>();
        }
        if (lo.contains("beta2")) {
            matched = false;
            beta2 = get_num(lo, "beta2", 0.0, problems, "lo");
            if (beta2 < 0.0) problems.add("lo.beta2 must be >= 0");
        }
        cfg.lo.phase = get_num(lo, "phase_rad", 0.0, problems, "lo");
        if (lo.contains("fringe_visibility")) {
            const double v = get_num(lo, "fringe_visibility", 0.0, problems, "lo");
            if (v < 0.0 || v > 1.0) problems.add("lo.fringe_visibility must lie in [0, 1]");
            cfg.fringe_visibility = v;
        }
    }

    // --- instrument -------------------------------------------------------
    if (root.contains("instrument")) {
        const auto& ins = root["instrument"];
        InstrumentModel m;
        check_keys(ins, "instrument",
                   {"irf_fwhm_ps", "phase_jitter_sigma_rad", "wandering_sigma_over_gamma",
                    "drift_rate_rad_per_s", "phase_walk_sigma_rad_per_sqrt_s",
                    "detector_rate_cps", "histogram_period_s", "bin_width_ps", "gh_order",
                    "nuisance"},
                   problems);
        m.irf_fwhm = get_num(ins, "irf_fwhm_ps", 0.0, problems, "instrument") * 1e-12;
        m.phase_jitter_sigma =
            get_num(ins, "phase_jitter_sigma_rad", 0.0, problems, "instrument");
        m.wandering_sigma =
            get_num(ins, "wandering_sigma_over_gamma", 0.0, problems, "instrument") * gamma;
        m.drift_rate = get_num(ins, "drift_rate_rad_per_s", M_PI / 1800.0, problems,
                               "instrument");
        m.phase_walk_sigma =
            get_num(ins, "phase_walk_sigma_rad_per_sqrt_s", 0.0, problems, "instrument");
        m.detector_rate = get_num(ins, "detector_rate_cps", 1.6e5, problems, "instrument");
        m.histogram_period = get_num(ins, "histogram_period_s", 60.0, problems, "instrument");
        m.bin_width = get_num(ins, "bin_width_ps", 0.0, problems, "instrument") * 1e-12;
        m.gh_order = static_cast<int>(get_num(ins, "gh_order", 21, problems, "instrument"));
        if (ins.contains("nuisance")) {
            const auto& nu = ins["nuisance"];
            check_keys(nu, "instrument.nuisance",
                       {"psb_base_cps", "psb_noise_cps", "psb_wandering_gain_cps",
                        "leakage_base", "leakage_noise", "leakage_spikes"},
                       problems);
            m.nuisance.psb_base =
                get_num(nu, "psb_base_cps", 1000.0, problems, "instrument.nuisance");
            m.nuisance.psb_noise =
                get_num(nu, "psb_noise_cps", 20.0, problems, "instrument.nuisance");
            m.nuisance.psb_wandering_gain =
                get_num(nu, "psb_wandering_gain_cps", 0.0, problems, "instrument.nuisance");
            m.nuisance.leakage_base =
                get_num(nu, "leakage_base", 0.002, problems, "instrument.nuisance");
            m.nuisance.leakage_noise =
                get_num(nu, "leakage_noise", 0.0005, problems, "instrument.nuisance");
            if (nu.contains("leakage_spikes")) {
                if (!nu["leakage_spikes"].is_array()) {
                    problems.add("instrument.nuisance.leakage_spikes must be [[interval, value], ...]");
                } else {
                    for (const auto& spike : nu["leakage_spikes"]) {
                        if (!spike.is_array() || spike.size() != 2 || !spike[0].is_number() ||
                            !spike[1].is_number()) {
                            problems.add(
                                "instrument.nuisance.leakage_spikes entries must be [interval, value]");
                            continue;
                        }
                        m.nuisance.leakage_spikes.emplace_back(
                            static_cast<std::size_t>(spike[0].get<double>()),
                            spike[1].get<double>());
                    }
                }
            }
        }
        if (m.irf_fwhm < 0.0) problems.add("instrument.irf_fwhm_ps must be >= 0");
        if (m.phase_jitter_sigma < 0.0)
            problems.add("instrument.phase_jitter_sigma_rad must be >= 0");
        if (m.wandering_sigma < 0.0)
            problems.add("instrument.wandering_sigma_over_gamma must be >= 0");
        if (m.drift_rate < 0.0) problems.add("instrument.drift_rate_rad_per_s must be >= 0");
        if (!(m.histogram_period > 0.0))
            problems.add("instrument.histogram_period_s must be > 0");
        if (m.detector_rate < 0.0) problems.add("instrument.detector_rate_cps must be >= 0");
        if (m.gh_order < 2) problems.add("instrument.gh_order must be >= 2");
        cfg.instrument = m;
    }

    // --- postselect ---------------------------------------------------------
    if (root.contains("postselect")) {
        const auto& ps = root["postselect"];
        check_keys(ps, "postselect", {"psb_max_cps", "leakage_max"}, problems);
        PostselectThresholds th;
        th.psb_max = get_num(ps, "psb_max_cps", th.psb_max, problems, "postselect");
        th.leakage_max = get_num(ps, "leakage_max", th.leakage_max, problems, "postselect");
        cfg.postselect = th;
    }

    // --- sweep ---------------------------------------------------------------
    double s_min = 0.01, s_max = 30.0;
    int s_points = 300;
    bool explicit_grid = false;
    if (root.contains("sweep")) {
        const auto& sw = root["sweep"];
        check_keys(sw, "sweep",
                   {"s_grid", "s_min", "s_max", "s_points", "phi_points", "tau_points",
                    "tau_span_over_gamma", "detuning_span_over_gamma", "detuning_points",
                    "phase_bins", "duration_s", "wigner_panel_s", "phase_panel_s"},
                   problems);
        if (sw.contains("s_grid")) {
            explicit_grid = true;
            if (!sw["s_grid"].is_array()) {
                problems.add("sweep.s_grid must be an array of numbers");
            } else {
                for (const auto& v : sw["s_grid"]) {
                    if (!v.is_number()) {
                        problems.add("sweep.s_grid must contain only numbers");
                        break;
                    }
                    cfg.sweep.s_grid.push_back(v.get<double>());
                }
            }
        }
        s_min = get_num(sw, "s_min", s_min, problems, "sweep");
        s_max = get_num(sw, "s_max", s_max, problems, "sweep");
        s_points = static_cast<int>(get_num(sw, "s_points", s_points, problems, "sweep"));
        cfg.sweep.phi_points =
            static_cast<int>(get_num(sw, "phi_points", cfg.sweep.phi_points, problems, "sweep"));
        cfg.sweep.tau_points =
            static_cast<int>(get_num(sw, "tau_points", cfg.sweep.tau_points, problems, "sweep"));
        cfg.sweep.tau_span_over_gamma =
            get_num(sw, "tau_span_over_gamma", cfg.sweep.tau_span_over_gamma, problems, "sweep");
        cfg.sweep.detuning_span_over_gamma = get_num(
            sw, "detuning_span_over_gamma", cfg.sweep.detuning_span_over_gamma, problems, "sweep");
        cfg.sweep.detuning_points = static_cast<int>(
            get_num(sw, "detuning_points", cfg.sweep.detuning_points, problems, "sweep"));
        cfg.sweep.phase_bins =
            static_cast<int>(get_num(sw, "phase_bins", cfg.sweep.phase_bins, problems, "sweep"));
        cfg.sweep.duration_s = get_num(sw, "duration_s", cfg.sweep.duration_s, problems, "sweep");
        const auto read_panel = [&](const char* key, std::vector<double>& into) {
            if (!sw.contains(key)) return;
            if (!sw[key].is_array()) {
                problems.add(std::string("sweep.") + key + " must be an array");
                return;
            }
            into.clear();
            for (const auto& v : sw[key]) into.push_back(v.get<double>());
        };
        read_panel("wigner_panel_s", cfg.sweep.wigner_panel_s);
        read_panel("phase_panel_s", cfg.sweep.phase_panel_s);
    }
    if (!explicit_grid) {
        if (!(s_min > 0.0) || !(s_max > s_min) || s_points < 2)
            problems.add("sweep: s_min/s_max/s_points must describe an ascending positive grid");
        else
            cfg.sweep.s_grid = logspace(s_min, s_max, s_points);
    }
    if (cfg.sweep.s_grid.empty()) problems.add("sweep.s_grid must not be empty");
    for (std::size_t i = 0; i < cfg.sweep.s_grid.size(); ++i) {
        if (!(cfg.sweep.s_grid[i] > 0.0)) {
            problems.add("sweep.s_grid values must be > 0");
            break;
        }
        if (i > 0 && cfg.sweep.s_grid[i] <= cfg.sweep.s_grid[i - 1]) {
            problems.add("sweep.s_grid must be strictly ascending");
            break;
        }
    }
    if (cfg.sweep.phi_points < 4) problems.add("sweep.phi_points must be >= 4");
    if (cfg.sweep.tau_points < 2) problems.add("sweep.tau_points must be >= 2");
    if (!(cfg.sweep.tau_span_over_gamma > 0.0))
        problems.add("sweep.tau_span_over_gamma must be > 0");
    if (cfg.sweep.detuning_points < 2) problems.add("sweep.detuning_points must be >= 2");
    if (cfg.sweep.phase_bins < 1) problems.add("sweep.phase_bins must be >= 1");
    if (!(cfg.sweep.duration_s > 0.0)) problems.add("sweep.duration_s must be > 0");

    // --- calibrate -------------------------------------------------------------
    if (root.contains("calibrate")) {
        const auto& cal = root["calibrate"];
        check_keys(cal, "calibrate",
                   {"target_percent_below_vacuum", "target_variance", "at_s", "free"},
                   problems);
        if (cal.contains("target_percent_below_vacuum") && cal.contains("target_variance"))
            problems.add("calibrate: give one of target_percent_below_vacuum / target_variance");
        if (cal.contains("target_percent_below_vacuum"))
            cfg.calibrate.target_variance =
                -get_num(cal, "target_percent_below_vacuum", 3.1, problems, "calibrate") / 100.0 *
                0.25;
        if (cal.contains("target_variance"))
            cfg.calibrate.target_variance =
                get_num(cal, "target_variance", cfg.calibrate.target_variance, problems,
                        "calibrate");
        cfg.calibrate.at_s = get_num(cal, "at_s", cfg.calibrate.at_s, problems, "calibrate");
        if (!(cfg.calibrate.at_s > 0.0)) problems.add("calibrate.at_s must be > 0");
        if (cal.contains("free")) {
            const std::string f = cal["free"].is_string() ? cal["free"].get<std::string>() : "";
            if (f == "phase_jitter")
                cfg.calibrate.free_parameter = CalibrationFree::phase_jitter;
            else if (f == "irf_fwhm")
                cfg.calibrate.free_parameter = CalibrationFree::irf_fwhm;
            else
                problems.add("calibrate.free must be \"phase_jitter\" or \"irf_fwhm\"");
        }
    }

    // --- output ---------------------------------------------------------------
    if (root.contains("output")) {
        const auto& out = root["output"];
        check_keys(out, "output", {"dir", "formats", "seed"}, problems);
        if (out.contains("dir")) {
            if (!out["dir"].is_string() || out["dir"].get<std::string>().empty())
                problems.add("output.dir must be a non-empty string");
            else
                cfg.output.dir = out["dir"].get<std::string>();
        }
        if (out.contains("formats")) {
            cfg.output.csv = cfg.output.json = cfg.output.svg = false;
            if (!out["formats"].is_array()) {
                problems.add("output.formats must be an array");
            } else {
                for (const auto& f : out["formats"]) {
                    const std::string name = f.is_string() ? f.get<std::string>() : "";
                    if (name == "csv")
                        cfg.output.csv = true;
                    else if (name == "json")
                        cfg.output.json = true;
                    else if (name == "svg")
                        cfg.output.svg = true;
                    else
                        problems.add("output.formats: unknown format \"" + name + "\"");
                }
            }
        }
        if (out.contains("seed")) {
            if (!out["seed"].is_number_unsigned() && !out["seed"].is_number_integer())
                problems.add("output.seed must be a non-negative integer");
            else
                cfg.output.seed = out["seed"].get<std::uint64_t>();
        }
    }

    // LO amplitude resolution needs a valid system; defer on earlier failures.
    problems.raise_if_any(origin);
    try {
        cfg.system.validate();
        cfg.lo.amplitude =
            matched ? LoConfig::matched(cfg.system, cfg.lo.phase).amplitude : std::sqrt(beta2);
    } catch (const std::exception& e) {
        throw config_error(std::string("invalid configuration (") + origin + "): " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string RunConfig::canonical_json() const {
    json j;
    j["system"] = {{"gamma_per_s", system.gamma},
                   {"s", system.saturation()},
                   {"rabi_over_gamma", system.rabi / system.gamma},
                   {"detuning_over_gamma", system.detuning / system.gamma},
                   {"dephasing_over_gamma", system.dephasing / system.gamma}};
    j["lo"] = {{"beta2", lo.flux()}, {"phase_rad", lo.phase}};
    if (fringe_visibility) j["lo"]["fringe_visibility"] = *fringe_visibility;
    if (instrument) {
        const auto& m = *instrument;
        j["instrument"] = {{"irf_fwhm_ps", m.irf_fwhm * 1e12},
                           {"phase_jitter_sigma_rad", m.phase_jitter_sigma},
                           {"wandering_sigma_over_gamma", m.wandering_sigma / system.gamma},
                           {"drift_rate_rad_per_s", m.drift_rate},
                           {"phase_walk_sigma_rad_per_sqrt_s", m.phase_walk_sigma},
                           {"detector_rate_cps", m.detector_rate},
                           {"histogram_period_s", m.histogram_period},
                           {"bin_width_ps", m.bin_width * 1e12},
                           {"gh_order", m.gh_order}};
        json spikes = json::array();
        for (const auto& [idx, v] : m.nuisance.leakage_spikes)
            spikes.push_back(json::array({idx, v}));
        j["instrument"]["nuisance"] = {{"psb_base_cps", m.nuisance.psb_base},
                                       {"psb_noise_cps", m.nuisance.psb_noise},
                                       {"psb_wandering_gain_cps", m.nuisance.psb_wandering_gain},
                                       {"leakage_base", m.nuisance.leakage_base},
                                       {"leakage_noise", m.nuisance.leakage_noise},
                                       {"leakage_spikes", spikes}};
    }
    if (postselect) {
        j["postselect"] = json::object();
        if (std::isfinite(postselect->psb_max)) j["postselect"]["psb_max_cps"] = postselect->psb_max;
        if (std::isfinite(postselect->leakage_max))
            j["postselect"]["leakage_max"] = postselect->leakage_max;
    }
    j["sweep"] = {{"s_grid_size", sweep.s_grid.size()},
                  {"s_grid_first", sweep.s_grid.front()},
                  {"s_grid_last", sweep.s_grid.back()},
                  {"phi_points", sweep.phi_points},
                  {"tau_points", sweep.tau_points},
                  {"tau_span_over_gamma", sweep.tau_span_over_gamma},
                  {"detuning_span_over_gamma", sweep.detuning_span_over_gamma},
                  {"detuning_points", sweep.detuning_points},
                  {"phase_bins", sweep.phase_bins},
                  {"duration_s", sweep.duration_s},
                  {"wigner_panel_s", sweep.wigner_panel_s},
                  {"phase_panel_s", sweep.phase_panel_s}};
    j["calibrate"] = {{"target_variance", calibrate.target_variance},
                      {"at_s", calibrate.at_s},
                      {"free", calibrate.free_parameter == CalibrationFree::phase_jitter
                                   ? "phase_jitter"
                                   : "irf_fwhm"}};
    json formats = json::array();
    if (output.csv) formats.push_back("csv");
    if (output.json) formats.push_back("json");
    if (output.svg) formats.push_back("svg");
    j["output"] = {{"dir", output.dir}, {"formats", formats}, {"seed", output.seed}};
    return j.dump(2);
}

std::uint64_t RunConfig::config_hash() const {
    // FNV-1a over the canonical echo: stable across runs of the same build.
    const std::string text = canonical_json();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace rfs::report
