#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "beliefsim/advantage.hpp"
#include "beliefsim/agents.hpp"
#include "beliefsim/btr.hpp"
#include "beliefsim/environments.hpp"
#include "beliefsim/truncation.hpp"

namespace beliefsim {

struct ExperimentConfig {
    // environment
    std::string task = "gn";  // gn | cd | pe
    std::string preset;       // optional named instance preset
    nlohmann::json instance;  // optional explicit instance document (fixed across rollouts)
    std::uint64_t instance_seed = 1;
    bool fresh_instance_per_rollout = true;
    int gn_digits = 3, gn_symbols = 5;
    int cd_candidates = 10, cd_labels = 2, cd_inputs = 2;
    bool cd_distinct = false;
    int pe_dimension = 3, pe_levels = 6, pe_reference = 6, pe_unseen = 3;
    double eta = 0.0;

    // agent
    PolicySpec policy;
    CorruptionSpec corruption;

    // truncation
    TruncationRule truncation;

    // run
    std::size_t horizon = 10;
    std::size_t rollouts = 1;
    std::uint64_t seed = 0;
    double gamma = 1.0;
    double lambda = 1.0;
    ValueCalibration calibration;
    double psi_max = kDefaultPsiMax;
    double answer_threshold = 0.999;
    // cap for the update-error growth fit grid (0 = 0.8 * log |S|)
    double fit_psi_max = 0.0;
    std::string output_dir = "out";
    std::size_t threads = 0;  // 0 = hardware concurrency

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct TurnRecord {
    std::string action;
    std::string observation;
    double agent_belief_true = 0.0;
    double oracle_belief_true = 0.0;
    double psi_agent = 0.0;
    double psi_oracle = 0.0;
    std::size_t hypothesis_count = 0;
    double progress = 0.0;
    bool truncation_verdict = false;
};

struct TrajectoryRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double initial_belief_true = 0.0;  // uniform prior at the true state
    std::size_t initial_hypothesis_count = 0;
    std::vector<TurnRecord> turns;
    bool truncated = false;
    std::size_t t_s = 0;  // equals turns.size() when not truncated
    bool success = false;
    std::string answer;
    double reward = 0.0;

    std::size_t num_turns() const { return turns.size(); }
    // potential series psi_0..psi_T (agent or oracle)
    std::vector<double> psi_series(bool oracle, double psi_max = kDefaultPsiMax) const;
    // value inputs b_0(s*)..b_{T-1}(s*) for TD errors (agent beliefs)
    std::vector<double> belief_true_series() const;
    nlohmann::json to_json() const;
};

TaskEnv build_env(const ExperimentConfig& config, std::size_t rollout_index);

// One seeded rollout; deterministic given (env, config, index).
TrajectoryRecord rollout(const TaskEnv& env, const ExperimentConfig& config, std::size_t index);

struct ExperimentSummary {
    std::size_t rollouts = 0;
    double success_rate = 0.0;
    double mean_turns = 0.0;
    std::size_t total_turns = 0;  // token-cost surrogate: interaction turns
    double truncation_frequency = 0.0;
    double mean_reward = 0.0;
};

struct ExperimentResult {
    std::vector<TrajectoryRecord> trajectories;
    ExperimentSummary summary;
    nlohmann::json constants;  // theory constants and fit diagnostics
};

ExperimentResult run_experiment_in_memory(const ExperimentConfig& config);

// Writes trajectories.jsonl, advantage.csv, constants.json and summary.csv
// under config.output_dir; byte-identical for identical (config, seed).
ExperimentSummary run_experiment(const ExperimentConfig& config);

// Fits the theory constants for the configured agent on a probe environment
// and measures mu (oracle potential floor) plus trap-entry statistics.
nlohmann::json compute_constants_report(const ExperimentConfig& config,
                                        const std::vector<TrajectoryRecord>& trajectories);

ExperimentSummary summarize(const std::vector<TrajectoryRecord>& trajectories);

}  // namespace beliefsim
