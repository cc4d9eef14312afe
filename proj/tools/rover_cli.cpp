#include <CLI11.hpp>
#include <iostream>

#include "rover/harness/run.hpp"

namespace {

int apply_overrides(rover::harness::RunConfig& config, const std::string& mode,
                    int window, const std::string& marg, std::uint64_t seed, int trials) {
    using rover::harness::EstimatorMode;
    using rover::harness::MargMode;
    if (!mode.empty()) {
        if (mode == "full-csi") {
            config.mode = EstimatorMode::FullCsi;
        } else if (mode == "bearings-only") {
            config.mode = EstimatorMode::BearingsOnly;
        } else {
            std::cerr << "unknown mode: " << mode << '\n';
            return 2;
        }
    }
    if (window > 0) config.window_size = window;
    if (!marg.empty()) {
        if (marg == "flexible") {
            config.marginalization = MargMode::Flexible;
        } else if (marg == "fifo") {
            config.marginalization = MargMode::FifoOnly;
        } else if (marg == "off") {
            config.marginalization = MargMode::Off;
        } else {
            std::cerr << "unknown marginalization mode: " << marg << '\n';
            return 2;
        }
    }
    if (seed > 0) config.seed = seed;
    if (trials > 0) config.trials = trials;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backscatter AoA-IMU SLAM simulation harness"};
    app.require_subcommand(1);

    std::string config_path, config_b_path, out_dir, mode, marg;
    int window = 0, trials = 0;
    std::uint64_t seed = 0;
    std::vector<int> sizes;

    auto* run_cmd = app.add_subcommand("run", "simulate and estimate one configuration");
    run_cmd->add_option("--config", config_path, "run config JSON")->required();
    run_cmd->add_option("--mode", mode, "full-csi | bearings-only");
    run_cmd->add_option("--window", window, "sliding window size");
    run_cmd->add_option("--marg", marg, "flexible | fifo | off");
    run_cmd->add_option("--seed", seed, "base seed");
    run_cmd->add_option("--trials", trials, "number of trials");
    run_cmd->add_option("--out", out_dir, "output directory");

    auto* compare_cmd =
        app.add_subcommand("compare", "paired run of two configs on one scenario");
    compare_cmd->add_option("--config-a", config_path, "first run config")->required();
    compare_cmd->add_option("--config-b", config_b_path, "second run config")->required();
    compare_cmd->add_option("--out", out_dir, "output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "window-size sweep");
    sweep_cmd->add_option("--config", config_path, "run config JSON")->required();
    sweep_cmd->add_option("--sizes", sizes, "window sizes")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::optional<std::string> out =
            out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
        if (run_cmd->parsed()) {
            auto config = rover::harness::load_run_config(config_path);
            if (const int rc = apply_overrides(config, mode, window, marg, seed, trials)) {
                return rc;
            }
            const auto report = rover::harness::run(config, out);
            std::cout << report.to_json() << '\n';
        } else if (compare_cmd->parsed()) {
            const auto a = rover::harness::load_run_config(config_path);
            const auto b = rover::harness::load_run_config(config_b_path);
            const auto report = rover::harness::compare(a, b, out);
            std::cout << report.to_json() << '\n';
        } else if (sweep_cmd->parsed()) {
            const auto config = rover::harness::load_run_config(config_path);
            const auto rows = rover::harness::sweep_window_size(config, sizes, out);
            std::cout << "window_size,median_robot_mean_error,mean_solve_ms\n";
            for (const auto& r : rows) {
                std::cout << r.window_size << ',' << r.median_robot_mean_error << ','
                          << r.mean_solve_ms << '\n';
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
