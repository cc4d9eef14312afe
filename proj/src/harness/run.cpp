#include "rover/harness/run.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>

#include <json.hpp>

#include "rover/harness/metrics.hpp"

namespace rover::harness {

using nlohmann::json;

void RunConfig::validate() const {
    if (window_size < 2) throw std::invalid_argument("window size must be >= 2");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

PipelineConfig RunConfig::pipeline_config(const sim::NoiseConfig& noise) const {
    PipelineConfig p;
    p.mode = mode;
    p.window.max_states = window_size;
    p.window.ridge_on_degeneracy = true;
    switch (marginalization) {
        case MargMode::Flexible: p.policy.mode = slam::PolicyConfig::Mode::Flexible; break;
        case MargMode::FifoOnly: p.policy.mode = slam::PolicyConfig::Mode::FifoOnly; break;
        case MargMode::Off: p.policy.mode = slam::PolicyConfig::Mode::Off; break;
    }
    p.ekf.mag_noise = std::max(noise.mag_heading_noise, 1e-3);
    return p;
}

RunConfig run_config_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    RunConfig c;
    if (j.at("scenario").is_string()) {
        c.scenario = sim::load_scenario_file(j["scenario"].get<std::string>());
    } else {
        c.scenario = sim::scenario_from_json(j["scenario"].dump());
    }
    const std::string mode = j.value("mode", "bearings-only");
    if (mode == "bearings-only") {
        c.mode = EstimatorMode::BearingsOnly;
    } else if (mode == "full-csi") {
        c.mode = EstimatorMode::FullCsi;
    } else {
        throw std::invalid_argument("unknown mode: " + mode);
    }
    c.window_size = j.value("window_size", c.window_size);
    const std::string marg = j.value("marginalization", "flexible");
    if (marg == "flexible") {
        c.marginalization = MargMode::Flexible;
    } else if (marg == "fifo" || marg == "fifo-only") {
        c.marginalization = MargMode::FifoOnly;
    } else if (marg == "off") {
        c.marginalization = MargMode::Off;
    } else {
        throw std::invalid_argument("unknown marginalization mode: " + marg);
    }
    c.seed = j.value("seed", c.seed);
    c.trials = j.value("trials", c.trials);
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open run config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return run_config_from_json(text);
}

std::string run_config_to_json(const RunConfig& c) {
    json j;
    j["scenario"] = json::parse(sim::scenario_to_json(c.scenario));
    j["mode"] = c.mode == EstimatorMode::FullCsi ? "full-csi" : "bearings-only";
    j["window_size"] = c.window_size;
    switch (c.marginalization) {
        case MargMode::Flexible: j["marginalization"] = "flexible"; break;
        case MargMode::FifoOnly: j["marginalization"] = "fifo-only"; break;
        case MargMode::Off: j["marginalization"] = "off"; break;
    }
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    return j.dump(2);
}

int worker_threads() {
    const char* env = std::getenv("ROVER_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

namespace {

TrialReport run_trial(const RunConfig& config, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const sim::WorldScenario world = config.scenario.build(seed);
    const PipelineConfig pipeline = config.pipeline_config(world.noise);
    PipelineResult raw = run_pipeline(world, pipeline);

    TrialReport r;
    r.seed = seed;
    std::vector<double> solve_times;
    for (const auto& u : raw.updates) {
        r.error_curve.push_back(u.robot_error);
        r.update_times.push_back(u.t);
        solve_times.push_back(u.solve_ms);
    }
    if (!r.error_curve.empty()) {
        r.robot_mean_error = mean(r.error_curve);
        r.robot_median_error = median(r.error_curve);
        r.robot_rmse = rms(r.error_curve);
        r.mean_solve_ms = mean(solve_times);
    }
    r.tag_final_errors = raw.tag_errors;
    std::vector<double> los_errors;
    for (const auto& tag : config.scenario.tags) {
        const auto it = raw.tag_errors.find(tag.id);
        if (it != raw.tag_errors.end() && !tag.nlos) los_errors.push_back(it->second);
    }
    if (!los_errors.empty()) r.mean_tag_error_los = mean(los_errors);
    r.updates = static_cast<int>(raw.updates.size());
    r.skips = raw.n_skips;
    r.fifo_evictions = raw.n_fifo_evictions;
    r.lifo_evictions = raw.n_lifo_evictions;
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.raw = std::move(raw);
    return r;
}

json trial_to_json(const TrialReport& r) {
    json j;
    j["seed"] = r.seed;
    j["robot_mean_error"] = r.robot_mean_error;
    j["robot_median_error"] = r.robot_median_error;
    j["robot_rmse"] = r.robot_rmse;
    j["mean_solve_ms"] = r.mean_solve_ms;
    j["runtime_s"] = r.runtime_s;
    j["updates"] = r.updates;
    j["skips"] = r.skips;
    j["fifo_evictions"] = r.fifo_evictions;
    j["lifo_evictions"] = r.lifo_evictions;
    j["mean_tag_error_los"] = r.mean_tag_error_los;
    json tags = json::object();
    for (const auto& [id, err] : r.tag_final_errors) tags[std::to_string(id)] = err;
    j["tag_final_errors"] = tags;
    return j;
}

void write_outputs(const RunReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/report.json");
        out << report.to_json() << '\n';
    }
    if (report.trials.empty()) return;
    const TrialReport& first = report.trials.front();
    {
        std::ofstream out(out_dir + "/trajectory.csv");
        out << "t,est_x,est_y,truth_x,truth_y,error\n";
        out.precision(12);
        for (const auto& u : first.raw.updates) {
            out << u.t << ',' << u.robot_estimate.x() << ',' << u.robot_estimate.y() << ','
                << u.robot_truth.x() << ',' << u.robot_truth.y() << ',' << u.robot_error
                << '\n';
        }
    }
    {
        std::ofstream out(out_dir + "/tags.csv");
        out << "tag,est_x,est_y,final_error\n";
        out.precision(12);
        for (const auto& [id, est] : first.raw.tag_estimates) {
            const auto it = first.raw.tag_errors.find(id);
            out << id << ',' << est.x() << ',' << est.y() << ','
                << (it != first.raw.tag_errors.end() ? it->second : -1.0) << '\n';
        }
    }
    {
        std::ofstream out(out_dir + "/policy.jsonl");
        for (const auto& line : first.raw.policy_trace) out << line << '\n';
    }
}

}  // namespace

std::string RunReport::to_json() const {
    json j;
    j["config"] = json::parse(run_config_to_json(config));
    j["median_robot_mean_error"] = median_robot_mean_error;
    j["median_tag_error_los"] = median_tag_error_los;
    j["trials"] = json::array();
    for (const auto& t : trials) j["trials"].push_back(trial_to_json(t));
    return j.dump(2);
}

RunReport run(const RunConfig& config, const std::optional<std::string>& out_dir) {
    config.validate();
    RunReport report;
    report.config = config;
    report.trials.resize(config.trials);

    const int workers = std::min(worker_threads(), config.trials);
    if (workers <= 1) {
        for (int i = 0; i < config.trials; ++i) {
            report.trials[i] = run_trial(config, config.seed + static_cast<std::uint64_t>(i));
        }
    } else {
        std::vector<std::future<void>> futures;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&]() {
                for (int i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1)) {
                    report.trials[i] =
                        run_trial(config, config.seed + static_cast<std::uint64_t>(i));
                }
            }));
        }
        for (auto& f : futures) f.get();
    }

    std::vector<double> means, tag_means;
    for (const auto& t : report.trials) {
        means.push_back(t.robot_mean_error);
        if (t.mean_tag_error_los > 0.0) tag_means.push_back(t.mean_tag_error_los);
    }
    if (!means.empty()) report.median_robot_mean_error = median(means);
    if (!tag_means.empty()) report.median_tag_error_los = median(tag_means);

    if (out_dir) write_outputs(report, *out_dir);
    return report;
}

std::string CompareReport::to_json() const {
    json j;
    j["a"] = json::parse(a.to_json());
    j["b"] = json::parse(b.to_json());
    j["error_ratio_curve"] = error_ratio_curve;
    return j.dump(2);
}

CompareReport compare(const RunConfig& config_a, const RunConfig& config_b,
                      const std::optional<std::string>& out_dir) {
    if (sim::scenario_to_json(config_a.scenario) != sim::scenario_to_json(config_b.scenario)) {
        throw std::invalid_argument("compare requires identical scenarios");
    }
    if (config_a.seed != config_b.seed || config_a.trials != config_b.trials) {
        throw std::invalid_argument("compare requires identical seeds and trial counts");
    }
    CompareReport report;
    report.a = run(config_a);
    report.b = run(config_b);

    // Median over trials of the per-update error ratio b/a. Admission
    // decisions do not depend on the eviction policy, so curves align.
    std::size_t n_updates = SIZE_MAX;
    for (const auto& t : report.a.trials) n_updates = std::min(n_updates, t.error_curve.size());
    for (const auto& t : report.b.trials) n_updates = std::min(n_updates, t.error_curve.size());
    if (n_updates == SIZE_MAX) n_updates = 0;
    for (std::size_t u = 0; u < n_updates; ++u) {
        std::vector<double> ratios;
        for (std::size_t t = 0; t < report.a.trials.size(); ++t) {
            const double ea = std::max(report.a.trials[t].error_curve[u], 1e-6);
            ratios.push_back(report.b.trials[t].error_curve[u] / ea);
        }
        report.error_ratio_curve.push_back(median(ratios));
    }

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream out(*out_dir + "/compare.json");
        out << report.to_json() << '\n';
    }
    return report;
}

std::vector<SweepRow> sweep_window_size(const RunConfig& config, const std::vector<int>& sizes,
                                        const std::optional<std::string>& out_dir) {
    for (int s : sizes) {
        if (s < 2 || s > 200) throw std::invalid_argument("sweep sizes must be in [2, 200]");
    }
    std::vector<SweepRow> rows;
    for (int size : sizes) {
        RunConfig c = config;
        c.window_size = size;
        const RunReport report = run(c);
        SweepRow row;
        row.window_size = size;
        row.median_robot_mean_error = report.median_robot_mean_error;
        std::vector<double> solve_ms;
        for (const auto& t : report.trials) {
            row.per_trial_mean_error.push_back(t.robot_mean_error);
            solve_ms.push_back(t.mean_solve_ms);
        }
        row.mean_solve_ms = mean(solve_ms);
        rows.push_back(row);
    }
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream out(*out_dir + "/sweep.csv");
        out << "window_size,median_robot_mean_error,mean_solve_ms\n";
        for (const auto& r : rows) {
            out << r.window_size << ',' << r.median_robot_mean_error << ',' << r.mean_solve_ms
                << '\n';
        }
    }
    return rows;
}

}  // namespace rover::harness
