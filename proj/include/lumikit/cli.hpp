#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lumikit/color.hpp"
#include "lumikit/relight.hpp"

namespace lumikit::cli {

/// Defaults shared by every subcommand. Built-in values are overridden by a
/// config file, which is in turn overridden by explicit flags.
struct ToolConfig {
    CannyParams canny;
    std::string wb_method = "gray_world";
    double lambda = 0.2;
    std::vector<PresetId> presets{PresetId::c1, PresetId::c2, PresetId::c3, PresetId::c4,
                                  PresetId::c5, PresetId::c6, PresetId::c7};
    std::string manifest_name = "manifest.jsonl";
    std::string plot_dir = "plots";
    bool plot = false;
    int bit_depth = 8;
    int threads = 1;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Keys: canny {low_threshold, high_threshold, blur_sigma, relative}, wb_method,
/// lambda, presets, manifest_name, plot_dir, plot, bit_depth, threads, seed.
/// Missing keys keep the values already in `base`; unknown keys are rejected.
ToolConfig parse_tool_config(const std::string& json_text, ToolConfig base = {});
/// Echo of the effective config for reports. Omits `threads`.
nlohmann::ordered_json config_to_json(const ToolConfig& config);

/// Entry point behind the `lumikit` executable. Returns the process exit code:
/// 0 success, 1 validation error or bad usage, 2 I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lumikit::cli
