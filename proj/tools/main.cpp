#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "report/config.hpp"
#include "report/figures.hpp"
#include "rfsqueeze/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitEmptyAcceptance = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string formats;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--format", opts.formats, "comma-separated list: csv,json,svg");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
}

rfs::report::RunConfig resolve(const CommonOpts& opts) {
    rfs::report::RunConfig cfg = opts.config_path.empty()
                                     ? rfs::report::parse_config("{}", "<defaults>")
                                     : rfs::report::load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.output.dir = opts.out_dir;
    if (opts.seed_set) cfg.output.seed = opts.seed;
    if (!opts.formats.empty()) {
        cfg.output.csv = cfg.output.json = cfg.output.svg = false;
        std::string item;
        std::stringstream ss(opts.formats);
        while (std::getline(ss, item, ',')) {
            if (item == "csv")
                cfg.output.csv = true;
            else if (item == "json")
                cfg.output.json = true;
            else if (item == "svg")
                cfg.output.svg = true;
            else
                throw rfs::report::config_error("unknown format: " + item);
        }
    }
    // Relative output directories live under the optional root.
    if (const char* root = std::getenv("RFSQUEEZE_OUT_ROOT")) {
        std::filesystem::path dir(cfg.output.dir);
        if (dir.is_relative()) cfg.output.dir = (std::filesystem::path(root) / dir).string();
    }
    return cfg;
}

void report_files(const std::string& what, const std::vector<std::string>& files) {
    std::cout << what << ": wrote " << files.size() << " file(s)\n";
    for (const auto& f : files) std::cout << "  " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance-fluorescence squeezing simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string figure_id;

    auto* cmd_reproduce = app.add_subcommand("reproduce", "emit data files for one figure");
    cmd_reproduce->add_option("figure", figure_id, "figure id (fig1b..fig3b)")->required();
    add_common(cmd_reproduce, opts);

    auto* cmd_campaign =
        app.add_subcommand("campaign", "simulate a measurement campaign end to end");
    add_common(cmd_campaign, opts);

    auto* cmd_sweep = app.add_subcommand("sweep", "steady-state observables over the grids");
    add_common(cmd_sweep, opts);

    auto* cmd_calibrate =
        app.add_subcommand("calibrate", "fit the free instrument width to a target squeezing");
    add_common(cmd_calibrate, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = resolve(opts);
        if (cmd_reproduce->parsed()) {
            const auto figure = rfs::report::figure_from_name(figure_id);
            if (!figure)
                throw rfs::report::config_error("unknown figure id: " + figure_id +
                                                " (expected fig1b..fig3b)");
            report_files("reproduce " + figure_id, rfs::report::reproduce(*figure, cfg));
        } else if (cmd_campaign->parsed()) {
            report_files("campaign", rfs::report::run_campaign(cfg));
        } else if (cmd_sweep->parsed()) {
            report_files("sweep", rfs::report::run_sweep(cfg));
        } else if (cmd_calibrate->parsed()) {
            report_files("calibrate", rfs::report::run_calibrate(cfg));
        }
    } catch (const rfs::report::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rfs::invalid_input& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rfs::accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << " (defect " << e.defect() << ")\n";
        return kExitAccuracy;
    } catch (const rfs::empty_acceptance& e) {
        std::cerr << "empty acceptance: " << e.what() << '\n';
        return kExitEmptyAcceptance;
    } catch (const rfs::no_solution& e) {
        std::cerr << "no solution: " << e.what() << " [bracket " << e.bracket_lo() << " -> "
                  << e.value_at_lo() << ", " << e.bracket_hi() << " -> " << e.value_at_hi()
                  << "]\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
