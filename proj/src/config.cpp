// SPDX-License-Identifier: Apache-2.0
#include "restir/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "restir/parallel.hpp"

namespace restir {

using nlohmann::json;

std::string run_mode_name(RunMode m) {
    switch (m) {
    case RunMode::RenderDi: return "render-di";
    case RunMode::RenderPath: return "render-path";
    case RunMode::TestbedUnbiasedness: return "testbed-unbiasedness";
    case RunMode::TestbedTwoPixel: return "testbed-two-pixel";
    case RunMode::TestbedChain: return "testbed-chain";
    case RunMode::Metrics: return "metrics";
    }
    return "?";
}

namespace {

RunMode mode_from_name(const std::string &name) {
    if (name == "render-di") return RunMode::RenderDi;
    if (name == "render-path") return RunMode::RenderPath;
    if (name == "testbed-unbiasedness") return RunMode::TestbedUnbiasedness;
    if (name == "testbed-two-pixel") return RunMode::TestbedTwoPixel;
    if (name == "testbed-chain") return RunMode::TestbedChain;
    if (name == "metrics") return RunMode::Metrics;
    throw std::runtime_error("config: unknown mode '" + name + "'");
}

const std::set<std::string> kKnownKeys = {
    "mode", "scene", "width", "height", "frames", "warmup_frames", "ensemble_k",
    "initial_candidates", "m_cap", "mutation_iters", "s1", "s2", "strategy",
    "spatial_k", "spatial_radius", "spatial_rounds", "seed", "threads", "out",
    "ensemble_dir", "covariance_radii", "covariance_radius", "duplicate_window",
    "trials", "testbed_M", "testbed_mutations", "proposal_scale", "chain_steps",
    "chain_bins",
};

void require(bool ok, const std::string &msg) {
    if (!ok)
        throw std::runtime_error("config: " + msg);
}

} // namespace

RenderSettings RunConfig::to_render_settings() const {
    RenderSettings s;
    s.mode = mode == RunMode::RenderPath ? RenderMode::OneBounce : RenderMode::DirectLighting;
    s.width = width;
    s.height = height;
    s.initial_candidates = initial_candidates;
    s.m_cap = m_cap;
    s.mutation_iters = mutation_iters;
    s.strategy = strategy == "reconnection-vertex" ? MutationStrategy::ReconnectionVertex
                                                   : MutationStrategy::DiDirection;
    s.s1 = s1;
    s.s2 = s2;
    s.spatial_k = spatial_k;
    s.spatial_radius = spatial_radius;
    s.spatial_rounds = spatial_rounds;
    s.seed = seed;
    s.threads = threads > 0 ? threads : hardware_threads();
    return s;
}

std::string RunConfig::to_json() const {
    json j;
    j["mode"] = run_mode_name(mode);
    j["scene"] = scene_path;
    j["width"] = width;
    j["height"] = height;
    j["frames"] = frames;
    j["warmup_frames"] = warmup_frames;
    j["ensemble_k"] = ensemble_k;
    j["initial_candidates"] = initial_candidates;
    j["m_cap"] = m_cap;
    j["mutation_iters"] = mutation_iters;
    j["s1"] = s1;
    j["s2"] = s2;
    j["strategy"] = strategy;
    j["spatial_k"] = spatial_k;
    j["spatial_radius"] = spatial_radius;
    j["spatial_rounds"] = spatial_rounds;
    j["seed"] = seed;
    j["threads"] = threads;
    j["out"] = out_dir;
    j["ensemble_dir"] = ensemble_dir;
    j["covariance_radii"] = covariance_radii;
    j["covariance_radius"] = covariance_radius;
    j["duplicate_window"] = duplicate_window;
    j["trials"] = trials;
    j["testbed_M"] = testbed_M;
    j["testbed_mutations"] = testbed_mutations;
    j["proposal_scale"] = proposal_scale;
    j["chain_steps"] = chain_steps;
    j["chain_bins"] = chain_bins;
    return j.dump(2) + "\n";
}

RunConfig parse_config_text(const std::string &json_text, const CliOverrides &overrides) {
    RunConfig cfg;
    json j = json::object();
    if (!json_text.empty()) {
        j = json::parse(json_text);
        require(j.is_object(), "top level must be a JSON object");
    }

    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kKnownKeys.count(it.key()))
            throw std::runtime_error("config: unknown key '" + it.key() + "'");

    if (j.contains("mode"))
        cfg.mode = mode_from_name(j["mode"].get<std::string>());
    cfg.scene_path = j.value("scene", cfg.scene_path);
    cfg.width = j.value("width", cfg.width);
    cfg.height = j.value("height", cfg.height);
    cfg.frames = j.value("frames", cfg.frames);
    cfg.warmup_frames = j.value("warmup_frames", cfg.warmup_frames);
    cfg.ensemble_k = j.value("ensemble_k", cfg.ensemble_k);
    cfg.initial_candidates = j.value("initial_candidates", cfg.initial_candidates);
    cfg.m_cap = j.value("m_cap", cfg.m_cap);
    cfg.mutation_iters = j.value("mutation_iters", cfg.mutation_iters);
    cfg.s1 = j.value("s1", cfg.s1);
    cfg.s2 = j.value("s2", cfg.s2);
    cfg.strategy = j.value("strategy", cfg.strategy);
    cfg.spatial_k = j.value("spatial_k", cfg.spatial_k);
    cfg.spatial_radius = j.value("spatial_radius", cfg.spatial_radius);
    cfg.spatial_rounds = j.value("spatial_rounds", cfg.spatial_rounds);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.ensemble_dir = j.value("ensemble_dir", cfg.ensemble_dir);
    if (j.contains("covariance_radii"))
        cfg.covariance_radii = j["covariance_radii"].get<std::vector<int>>();
    cfg.covariance_radius = j.value("covariance_radius", cfg.covariance_radius);
    cfg.duplicate_window = j.value("duplicate_window", cfg.duplicate_window);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.testbed_M = j.value("testbed_M", cfg.testbed_M);
    cfg.testbed_mutations = j.value("testbed_mutations", cfg.testbed_mutations);
    cfg.proposal_scale = j.value("proposal_scale", cfg.proposal_scale);
    cfg.chain_steps = j.value("chain_steps", cfg.chain_steps);
    cfg.chain_bins = j.value("chain_bins", cfg.chain_bins);

    // Flags override file values.
    if (overrides.mode)
        cfg.mode = mode_from_name(*overrides.mode);
    if (overrides.seed)
        cfg.seed = *overrides.seed;
    if (overrides.threads)
        cfg.threads = *overrides.threads;
    if (overrides.out_dir)
        cfg.out_dir = *overrides.out_dir;
    if (overrides.scene_path)
        cfg.scene_path = *overrides.scene_path;
    if (overrides.ensemble_dir)
        cfg.ensemble_dir = *overrides.ensemble_dir;

    if (cfg.out_dir.empty()) {
        const char *root = std::getenv("RESTIR_OUT_ROOT");
        cfg.out_dir = (root && *root ? std::string(root) : std::string("out")) + "/" +
                      run_mode_name(cfg.mode);
    }

    // Validation, naming the offending field.
    require(cfg.width > 0, "width must be > 0");
    require(cfg.height > 0, "height must be > 0");
    require(cfg.frames >= 0, "frames must be >= 0");
    require(cfg.warmup_frames >= 0, "warmup_frames must be >= 0");
    require(cfg.ensemble_k >= 2, "ensemble_k must be >= 2");
    require(cfg.initial_candidates >= 1, "initial_candidates must be >= 1");
    require(cfg.m_cap >= 0, "m_cap must be >= 0");
    require(cfg.mutation_iters >= 0, "mutation_iters must be >= 0");
    require(cfg.s1 > 0 && cfg.s2 > 0 && cfg.s1 <= cfg.s2 && cfg.s2 < 1,
            "perturbation bounds must satisfy 0 < s1 <= s2 < 1");
    require(cfg.strategy == "di-direction" || cfg.strategy == "reconnection-vertex",
            "strategy must be 'di-direction' or 'reconnection-vertex'");
    require(cfg.spatial_k >= 0, "spatial_k must be >= 0");
    require(cfg.spatial_radius >= 0, "spatial_radius must be >= 0");
    require(cfg.spatial_rounds >= 0, "spatial_rounds must be >= 0");
    require(cfg.threads >= 0, "threads must be >= 0");
    require(cfg.covariance_radius >= 0, "covariance_radius must be >= 0");
    for (int r : cfg.covariance_radii)
        require(r >= 0, "covariance_radii entries must be >= 0");
    require(cfg.duplicate_window >= 2, "duplicate_window must be >= 2");
    require(cfg.trials >= 2, "trials must be >= 2");
    require(cfg.testbed_M >= 1, "testbed_M must be >= 1");
    require(cfg.testbed_mutations >= 0, "testbed_mutations must be >= 0");
    require(cfg.proposal_scale > 0 && cfg.proposal_scale < 1,
            "proposal_scale must be in (0, 1)");
    require(cfg.chain_steps >= 1, "chain_steps must be >= 1");
    require(cfg.chain_bins >= 2, "chain_bins must be >= 2");

    if (cfg.mode == RunMode::RenderDi || cfg.mode == RunMode::RenderPath) {
        require(!cfg.scene_path.empty(), "scene is required for render modes");
        std::ifstream probe(cfg.scene_path);
        require(probe.good(), "scene file '" + cfg.scene_path + "' does not exist");
    }
    if (cfg.mode == RunMode::Metrics)
        require(!cfg.ensemble_dir.empty(), "ensemble_dir is required for metrics mode");

    return cfg;
}

RunConfig parse_config(const std::string &config_path, const CliOverrides &overrides) {
    std::string text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw std::runtime_error("config: cannot open '" + config_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, overrides);
}

} // namespace restir
