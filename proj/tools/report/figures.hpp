#pragma once

#include <optional>
#include <string>
#include <vector>

#include "report/config.hpp"

namespace rfs::report {

inline constexpr const char* kVersion = "0.1.0";

enum class FigureId { fig1b, fig1c, fig1d, fig1e, fig2a, fig2b, fig3a, fig3b };

std::optional<FigureId> figure_from_name(const std::string& name);
const char* figure_name(FigureId id);

// Each command writes deterministic data files plus a manifest.json carrying
// the resolved configuration, its hash, the seed and the file list. Returns
// the paths written (relative to the command's output directory).
std::vector<std::string> reproduce(FigureId figure, const RunConfig& cfg);
std::vector<std::string> run_campaign(const RunConfig& cfg);
std::vector<std::string> run_sweep(const RunConfig& cfg);
std::vector<std::string> run_calibrate(const RunConfig& cfg);

}  // namespace rfs::report
