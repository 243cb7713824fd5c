#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beliefsim/rollout.hpp"
#include "beliefsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitVerifyFailure = 2;
constexpr int kExitIoError = 3;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json load_config_file(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

// dotted-path override, e.g. agent.corruption.eps0=0.2
void apply_override(nlohmann::json& config, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("override must look like path.to.key=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    nlohmann::json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw std::runtime_error("bad override path: " + path);
        if (dot == std::string::npos) {
            nlohmann::json parsed;
            try {
                parsed = nlohmann::json::parse(value);
            } catch (...) {
                parsed = value;  // bare strings are allowed unquoted
            }
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;

    beliefsim::ExperimentConfig resolve() const {
        nlohmann::json j = load_config_file(config_path);
        for (const auto& o : overrides) apply_override(j, o);  // flags win
        return beliefsim::ExperimentConfig::from_json(j);
    }
};

int cmd_run(const CommonOptions& opts) {
    const beliefsim::ExperimentConfig config = opts.resolve();
    const beliefsim::ExperimentSummary summary = beliefsim::run_experiment(config);
    std::cout << "rollouts=" << summary.rollouts << " success_rate=" << summary.success_rate
              << " mean_turns=" << summary.mean_turns << " total_turns=" << summary.total_turns
              << " truncation_frequency=" << summary.truncation_frequency
              << " mean_reward=" << summary.mean_reward << "\n"
              << "reports written to " << config.output_dir << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOptions& opts, const std::string& param,
              const std::vector<std::string>& values) {
    nlohmann::json base = load_config_file(opts.config_path);
    for (const auto& o : opts.overrides) apply_override(base, o);
    const std::string base_dir =
        base.value("output_dir", beliefsim::ExperimentConfig{}.output_dir);

    std::string csv =
        "value,rollouts,success_rate,mean_turns,total_turns,truncation_frequency,mean_reward\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        nlohmann::json j = base;
        apply_override(j, param + "=" + values[i]);
        j["output_dir"] = base_dir + "/sweep-" + std::to_string(i);
        const beliefsim::ExperimentConfig config = beliefsim::ExperimentConfig::from_json(j);
        const beliefsim::ExperimentSummary s = beliefsim::run_experiment(config);
        csv += values[i] + "," + std::to_string(s.rollouts) + "," +
               format_double(s.success_rate) + "," + format_double(s.mean_turns) + "," +
               std::to_string(s.total_turns) + "," + format_double(s.truncation_frequency) + "," +
               format_double(s.mean_reward) + "\n";
        std::cout << param << "=" << values[i] << " -> success_rate=" << s.success_rate
                  << " mean_turns=" << s.mean_turns << "\n";
    }
    std::filesystem::create_directories(base_dir);
    std::ofstream out(base_dir + "/sweep.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + base_dir + "/sweep.csv");
    out << csv;
    std::cout << "sweep summary written to " << base_dir << "/sweep.csv\n";
    return kExitOk;
}

int cmd_verify(const std::vector<std::string>& suites, const std::string& report_path) {
    std::vector<std::string> selected = suites;
    if (selected.empty()) selected = beliefsim::verify_suite_names();
    nlohmann::json report = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& name : selected) {
        const beliefsim::CheckResult result = beliefsim::run_verify_suite(name);
        all_pass = all_pass && result.pass;
        std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << result.name << ": " << result.details
                  << "\n";
        report.push_back({{"suite", result.name}, {"pass", result.pass}, {"details", result.details}});
    }
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + report_path);
        out << report.dump(2) << "\n";
    }
    return all_pass ? kExitOk : kExitVerifyFailure;
}

int cmd_presets() {
    std::cout << "GN presets (a, b, x0, y0):\n";
    for (const auto& name : beliefsim::gn_preset_names()) std::cout << "  " << name << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beliefsim: belief-filtering and trajectory-truncation lab"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts;
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    std::vector<std::string> verify_suites;
    std::string verify_report;

    CLI::App* run = app.add_subcommand("run", "run seeded rollouts and write reports");
    run->add_option("--config", run_opts.config_path, "experiment config (JSON)");
    run->add_option("--set", run_opts.overrides, "override config values (path.key=value)");

    CLI::App* sweep = app.add_subcommand("sweep", "run a grid over one config parameter");
    sweep->add_option("--config", sweep_opts.config_path, "experiment config (JSON)");
    sweep->add_option("--set", sweep_opts.overrides, "override config values (path.key=value)");
    sweep->add_option("--param", sweep_param, "dotted config path to sweep")->required();
    sweep->add_option("--values", sweep_values, "values for the swept parameter")->required();

    CLI::App* verify = app.add_subcommand("verify", "run registered verification suites");
    verify->add_option("--suite", verify_suites, "suite names (default: all)");
    verify->add_option("--report", verify_report, "write a JSON verdict to this path");

    app.add_subcommand("presets", "list named instance presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_param, sweep_values);
        if (verify->parsed()) return cmd_verify(verify_suites, verify_report);
        return cmd_presets();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.find("cannot") != std::string::npos || what.find("write") != std::string::npos) {
            std::cerr << "io error: " << what << "\n";
            return kExitIoError;
        }
        std::cerr << "error: " << what << "\n";
        return kExitConfigError;
    }
}
