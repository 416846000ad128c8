#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfsqueeze/campaign.hpp"
#include "rfsqueeze/homodyne.hpp"
#include "rfsqueeze/instrument.hpp"
#include "rfsqueeze/system_params.hpp"

namespace rfs::report {

// Configuration parse/validation failure; maps to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    std::vector<double> s_grid;          // default: 300 points logspaced [0.01, 30]
    int phi_points = 256;                // full-period phase grid
    int tau_points = 400;
    double tau_span_over_gamma = 15.0;
    double detuning_span_over_gamma = 5.0;
    int detuning_points = 201;
    int phase_bins = 10;
    double duration_s = 28800.0;         // 8 simulated hours
    std::vector<double> wigner_panel_s = {0.0, 0.36, 10.0, 1e6};  // 1e6 proxies s -> inf
    std::vector<double> phase_panel_s = {0.05, 0.1, 0.36, 1.0, 3.0};
};

struct CalibrateConfig {
    double target_variance = -0.031 * 0.25;  // 3.1% below vacuum
    double at_s = 0.1;
    CalibrationFree free_parameter = CalibrationFree::phase_jitter;
};

struct OutputConfig {
    std::string dir = "out";
    bool csv = true, json = true, svg = false;
    std::uint64_t seed = 20240101;
};

struct RunConfig {
    SystemParams system;
    LoConfig lo;                        // amplitude resolved (matched unless beta2 given)
    std::optional<double> fringe_visibility;  // overall target, e.g. 0.738
    std::optional<InstrumentModel> instrument;
    std::optional<PostselectThresholds> postselect;
    SweepConfig sweep;
    CalibrateConfig calibrate;
    OutputConfig output;

    // Resolved-config echo (defaults filled) for run manifests.
    std::string canonical_json() const;
    std::uint64_t config_hash() const;
};

// Strict JSON loading: unknown keys are rejected with a nearest-key
// suggestion and every violated constraint is reported, not just the first.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

}  // namespace rfs::report
