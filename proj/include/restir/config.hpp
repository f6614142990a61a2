// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "restir/pipeline.hpp"

namespace restir {

enum class RunMode {
    RenderDi,
    RenderPath,
    TestbedUnbiasedness,
    TestbedTwoPixel,
    TestbedChain,
    Metrics,
};

std::string run_mode_name(RunMode m);

/// One experiment's full configuration. Values come from a JSON config file
/// with command-line flags taking precedence; everything has a documented
/// default. The resolved configuration is echoed into the output directory.
struct RunConfig {
    RunMode mode = RunMode::RenderDi;
    std::string scene_path;
    int width = 64;
    int height = 64;
    int frames = 1;
    int warmup_frames = 30;
    int ensemble_k = 100;
    int initial_candidates = 32; // M
    double m_cap = 50;
    int mutation_iters = 1;
    double s1 = 1.0 / 1024.0;
    double s2 = 1.0 / 64.0;
    std::string strategy = "di-direction"; // or "reconnection-vertex"
    int spatial_k = 5;
    double spatial_radius = 10;
    int spatial_rounds = 1;
    uint64_t seed = 1;
    int threads = 0; // 0 = all logical cores
    std::string out_dir;
    std::string ensemble_dir; // metrics mode input

    std::vector<int> covariance_radii{1, 2, 4, 8, 16};
    int covariance_radius = 8;
    int duplicate_window = 20;

    // Testbed knobs.
    long long trials = 1000000;
    int testbed_M = 8;
    int testbed_mutations = 4;
    double proposal_scale = 0.05;
    long long chain_steps = 1000000;
    int chain_bins = 32;

    RenderSettings to_render_settings() const;
    std::string to_json() const;
};

struct CliOverrides {
    std::optional<std::string> mode;
    std::optional<uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
    std::optional<std::string> scene_path;
    std::optional<std::string> ensemble_dir;
};

/// Parses a JSON config file (empty path = all defaults), applies flag
/// overrides, validates, and fills defaults. Unknown keys and out-of-range
/// values raise std::runtime_error naming the field.
RunConfig parse_config(const std::string &config_path, const CliOverrides &overrides);

RunConfig parse_config_text(const std::string &json_text, const CliOverrides &overrides);

} // namespace restir
