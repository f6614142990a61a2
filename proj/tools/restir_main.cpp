// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "restir/runner.hpp"

namespace {

const char *kExitCodeHelp =
    "Exit codes:\n"
    "  0   success (all configured gates passed)\n"
    "  1   configuration or usage error\n"
    "  2   I/O error\n"
    "  10  testbed-unbiasedness gate failed (|z| >= 3)\n"
    "  11  testbed-two-pixel gate failed (no significant covariance reduction)\n"
    "  12  testbed-chain gate failed (TV distance out of bounds)\n";

struct CommonArgs {
    std::string config_path;
    restir::CliOverrides overrides;
};

void add_common(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("--config", args.config_path, "JSON config file (flags override file values)");
    cmd->add_option("--seed", [&args](const CLI::results_t &res) {
        args.overrides.seed = std::stoull(res[0]);
        return true;
    }, "Random seed (u64)");
    cmd->add_option("--threads", [&args](const CLI::results_t &res) {
        args.overrides.threads = std::stoi(res[0]);
        return true;
    }, "Worker threads (0 = logical cores)");
    cmd->add_option("--out", [&args](const CLI::results_t &res) {
        args.overrides.out_dir = res[0];
        return true;
    }, "Output directory (default: $RESTIR_OUT_ROOT or ./out)");
}

int execute(const CommonArgs &args) {
    try {
        restir::RunConfig cfg = restir::parse_config(args.config_path, args.overrides);
        return restir::run(cfg);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return restir::kExitConfigError;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spatiotemporal reservoir resampling with Metropolis-Hastings mutations"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);

    CommonArgs render_args, metrics_args, testbed_args;

    CLI::App *render = app.add_subcommand("render", "Render frames (render-di / render-path)");
    add_common(render, render_args);
    std::string render_mode = "render-di";
    std::string scene_path;
    render->add_option("--mode", render_mode, "render-di or render-path");
    render->add_option("--scene", scene_path, "Scene JSON file");

    CLI::App *metrics = app.add_subcommand("metrics", "Covariance / duplicate / MSE analysis of an ensemble");
    add_common(metrics, metrics_args);
    std::string ensemble_dir;
    metrics->add_option("--ensemble", ensemble_dir, "Directory with frame_*.pfm (and ids_*.csv)");

    CLI::App *tb = app.add_subcommand("testbed", "Statistical experiments on analytic 1D targets");
    add_common(tb, testbed_args);
    std::string tb_mode = "testbed-unbiasedness";
    tb->add_option("--mode", tb_mode,
                   "testbed-unbiasedness, testbed-two-pixel or testbed-chain");

    CLI11_PARSE(app, argc, argv);

    if (render->parsed()) {
        render_args.overrides.mode = render_mode;
        if (!scene_path.empty())
            render_args.overrides.scene_path = scene_path;
        return execute(render_args);
    }
    if (metrics->parsed()) {
        metrics_args.overrides.mode = "metrics";
        if (!ensemble_dir.empty())
            metrics_args.overrides.ensemble_dir = ensemble_dir;
        return execute(metrics_args);
    }
    testbed_args.overrides.mode = tb_mode;
    return execute(testbed_args);
}
