#include "beliefsim/rollout.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "beliefsim/hypothesis.hpp"
#include "beliefsim/rng.hpp"

namespace beliefsim {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PolicyKind policy_kind_from_name(const std::string& name) {
    if (name == "infogain_softmax") return PolicyKind::kInfogainSoftmax;
    if (name == "uniform_consistent") return PolicyKind::kUniformConsistent;
    if (name == "fixed_sequence") return PolicyKind::kFixedSequence;
    throw std::invalid_argument("unknown policy kind: " + name);
}

std::string policy_kind_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::kInfogainSoftmax: return "infogain_softmax";
        case PolicyKind::kUniformConsistent: return "uniform_consistent";
        case PolicyKind::kFixedSequence: return "fixed_sequence";
    }
    return "infogain_softmax";
}

CorruptionKind corruption_kind_from_name(const std::string& name) {
    if (name == "none") return CorruptionKind::kNone;
    if (name == "uniform_mix") return CorruptionKind::kUniformMix;
    if (name == "psi_coupled_mix") return CorruptionKind::kPsiCoupledMix;
    throw std::invalid_argument("unknown corruption kind: " + name);
}

std::string corruption_kind_name(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::kNone: return "none";
        case CorruptionKind::kUniformMix: return "uniform_mix";
        case CorruptionKind::kPsiCoupledMix: return "psi_coupled_mix";
    }
    return "none";
}

CalibrationKind calibration_kind_from_name(const std::string& name) {
    if (name == "identity") return CalibrationKind::kIdentity;
    if (name == "affine") return CalibrationKind::kAffine;
    if (name == "logistic") return CalibrationKind::kLogistic;
    throw std::invalid_argument("unknown calibration kind: " + name);
}

std::string calibration_kind_name(CalibrationKind kind) {
    switch (kind) {
        case CalibrationKind::kIdentity: return "identity";
        case CalibrationKind::kAffine: return "affine";
        case CalibrationKind::kLogistic: return "logistic";
    }
    return "identity";
}

}  // namespace

void ExperimentConfig::validate() const {
    if (task != "gn" && task != "cd" && task != "pe")
        throw std::invalid_argument("ExperimentConfig: task must be gn, cd or pe");
    if (horizon < 1) throw std::invalid_argument("ExperimentConfig: horizon must be >= 1");
    if (rollouts < 1) throw std::invalid_argument("ExperimentConfig: rollouts must be >= 1");
    if (gamma <= 0.0 || gamma > 1.0 || lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("ExperimentConfig: gamma in (0,1], lambda in [0,1]");
    if (answer_threshold <= 0.5 || answer_threshold > 1.0)
        throw std::invalid_argument("ExperimentConfig: answer_threshold in (0.5, 1]");
    if (eta < 0.0) throw std::invalid_argument("ExperimentConfig: eta must be >= 0");
    policy.validate();
    corruption.validate();
    truncation.validate();
    calibration.validate();
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("environment")) {
        const auto& env = j.at("environment");
        c.task = env.value("task", c.task);
        c.preset = env.value("preset", c.preset);
        if (env.contains("instance")) c.instance = env.at("instance");
        c.instance_seed = env.value("instance_seed", c.instance_seed);
        c.fresh_instance_per_rollout =
            env.value("fresh_instance_per_rollout", c.fresh_instance_per_rollout);
        c.gn_digits = env.value("gn_digits", c.gn_digits);
        c.gn_symbols = env.value("gn_symbols", c.gn_symbols);
        c.cd_candidates = env.value("cd_candidates", c.cd_candidates);
        c.cd_labels = env.value("cd_labels", c.cd_labels);
        c.cd_inputs = env.value("cd_inputs", c.cd_inputs);
        c.cd_distinct = env.value("cd_distinct", c.cd_distinct);
        c.pe_dimension = env.value("pe_dimension", c.pe_dimension);
        c.pe_levels = env.value("pe_levels", c.pe_levels);
        c.pe_reference = env.value("pe_reference", c.pe_reference);
        c.pe_unseen = env.value("pe_unseen", c.pe_unseen);
        c.eta = env.value("eta", c.eta);
    }
    if (j.contains("agent")) {
        const auto& agent = j.at("agent");
        if (agent.contains("policy")) {
            const auto& p = agent.at("policy");
            c.policy.kind = policy_kind_from_name(p.value("kind", policy_kind_name(c.policy.kind)));
            c.policy.temperature = p.value("temperature", c.policy.temperature);
            c.policy.seed = p.value("seed", c.policy.seed);
            if (p.contains("sequence"))
                c.policy.sequence = p.at("sequence").get<std::vector<ActionIndex>>();
        }
        if (agent.contains("corruption")) {
            const auto& k = agent.at("corruption");
            c.corruption.kind =
                corruption_kind_from_name(k.value("kind", corruption_kind_name(c.corruption.kind)));
            c.corruption.eps0 = k.value("eps0", c.corruption.eps0);
            c.corruption.slope = k.value("slope", c.corruption.slope);
            c.corruption.eps_cap = k.value("eps_cap", c.corruption.eps_cap);
        }
    }
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        c.truncation.kind = rule_kind_from_name(t.value("kind", rule_kind_name(c.truncation.kind)));
        c.truncation.k = t.value("k", c.truncation.k);
        c.truncation.delta_min = t.value("delta_min", c.truncation.delta_min);
        c.truncation.alpha = t.value("alpha", c.truncation.alpha);
        c.truncation.beta = t.value("beta", c.truncation.beta);
        c.truncation.seed = t.value("seed", c.truncation.seed);
    }
    if (j.contains("calibration")) {
        const auto& g = j.at("calibration");
        c.calibration.kind =
            calibration_kind_from_name(g.value("kind", calibration_kind_name(c.calibration.kind)));
        c.calibration.scale = g.value("scale", c.calibration.scale);
        c.calibration.offset = g.value("offset", c.calibration.offset);
        c.calibration.steepness = g.value("steepness", c.calibration.steepness);
        c.calibration.midpoint = g.value("midpoint", c.calibration.midpoint);
    }
    c.horizon = j.value("horizon", c.horizon);
    c.rollouts = j.value("rollouts", c.rollouts);
    c.seed = j.value("seed", c.seed);
    c.gamma = j.value("gamma", c.gamma);
    c.lambda = j.value("lambda", c.lambda);
    c.psi_max = j.value("psi_max", c.psi_max);
    c.answer_threshold = j.value("answer_threshold", c.answer_threshold);
    c.fit_psi_max = j.value("fit_psi_max", c.fit_psi_max);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.threads = j.value("threads", c.threads);
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json env{{"task", task},
                       {"instance_seed", instance_seed},
                       {"fresh_instance_per_rollout", fresh_instance_per_rollout},
                       {"eta", eta}};
    if (!preset.empty()) env["preset"] = preset;
    if (!instance.is_null()) env["instance"] = instance;
    if (task == "gn") {
        env["gn_digits"] = gn_digits;
        env["gn_symbols"] = gn_symbols;
    } else if (task == "cd") {
        env["cd_candidates"] = cd_candidates;
        env["cd_labels"] = cd_labels;
        env["cd_inputs"] = cd_inputs;
        env["cd_distinct"] = cd_distinct;
    } else {
        env["pe_dimension"] = pe_dimension;
        env["pe_levels"] = pe_levels;
        env["pe_reference"] = pe_reference;
        env["pe_unseen"] = pe_unseen;
    }
    nlohmann::json policy_j{{"kind", policy_kind_name(policy.kind)},
                            {"temperature", policy.temperature},
                            {"seed", policy.seed}};
    if (!policy.sequence.empty()) policy_j["sequence"] = policy.sequence;
    return nlohmann::json{
        {"environment", env},
        {"agent",
         {{"policy", policy_j},
          {"corruption",
           {{"kind", corruption_kind_name(corruption.kind)},
            {"eps0", corruption.eps0},
            {"slope", corruption.slope},
            {"eps_cap", corruption.eps_cap}}}}},
        {"truncation",
         {{"kind", rule_kind_name(truncation.kind)},
          {"k", truncation.k},
          {"delta_min", truncation.delta_min},
          {"alpha", truncation.alpha},
          {"beta", truncation.beta},
          {"seed", truncation.seed}}},
        {"calibration",
         {{"kind", calibration_kind_name(calibration.kind)},
          {"scale", calibration.scale},
          {"offset", calibration.offset},
          {"steepness", calibration.steepness},
          {"midpoint", calibration.midpoint}}},
        {"horizon", horizon},
        {"rollouts", rollouts},
        {"seed", seed},
        {"gamma", gamma},
        {"lambda", lambda},
        {"psi_max", psi_max},
        {"answer_threshold", answer_threshold},
        {"fit_psi_max", fit_psi_max},
        {"output_dir", output_dir},
        {"threads", threads}};
}

std::vector<double> TrajectoryRecord::psi_series(bool oracle, double psi_max) const {
    std::vector<double> psi;
    psi.reserve(turns.size() + 1);
    auto to_psi = [psi_max](double p) {
        return p <= std::exp(-psi_max) ? psi_max : std::max(0.0, -std::log(p));
    };
    psi.push_back(to_psi(initial_belief_true));
    for (const auto& t : turns) psi.push_back(oracle ? t.psi_oracle : t.psi_agent);
    return psi;
}

std::vector<double> TrajectoryRecord::belief_true_series() const {
    std::vector<double> beliefs;
    beliefs.reserve(turns.size());
    beliefs.push_back(initial_belief_true);
    for (std::size_t t = 0; t + 1 < turns.size(); ++t)
        beliefs.push_back(turns[t].agent_belief_true);
    return beliefs;
}

nlohmann::json TrajectoryRecord::to_json() const {
    nlohmann::json turns_j = nlohmann::json::array();
    for (const auto& t : turns) {
        turns_j.push_back({{"action", t.action},
                           {"observation", t.observation},
                           {"agent_belief_true", t.agent_belief_true},
                           {"oracle_belief_true", t.oracle_belief_true},
                           {"psi_agent", t.psi_agent},
                           {"psi_oracle", t.psi_oracle},
                           {"hypothesis_count", t.hypothesis_count},
                           {"progress", t.progress},
                           {"truncation_verdict", t.truncation_verdict}});
    }
    return nlohmann::json{{"index", index},
                          {"seed", seed},
                          {"initial_belief_true", initial_belief_true},
                          {"initial_hypothesis_count", initial_hypothesis_count},
                          {"turns", turns_j},
                          {"truncated", truncated},
                          {"t_s", t_s},
                          {"success", success},
                          {"answer", answer},
                          {"reward", reward}};
}

TaskEnv build_env(const ExperimentConfig& config, std::size_t rollout_index) {
    const std::uint64_t stream =
        config.fresh_instance_per_rollout ? rollout_index : std::uint64_t{0};
    RngStream rng(config.instance_seed, stream);
    if (!config.instance.is_null() && !config.instance.empty()) {
        const std::string task = config.instance.value("task", config.task);
        if (task == "gn") return make_gn_env(gn_from_json(config.instance));
        if (task == "cd") return make_cd_env(cd_from_json(config.instance));
        if (task == "pe") return make_pe_env(pe_from_json(config.instance));
        throw std::invalid_argument("build_env: unknown instance task " + task);
    }
    if (!config.preset.empty()) return make_gn_env(make_gn_preset(config.preset, rng));
    if (config.task == "gn")
        return make_gn_env(make_random_gn_instance(config.gn_digits, config.gn_symbols, rng));
    if (config.task == "cd")
        return make_cd_env(make_random_cd_instance(config.cd_candidates, config.cd_labels,
                                                   config.cd_inputs, rng, config.cd_distinct));
    return make_pe_env(make_random_pe_instance(config.pe_dimension, config.pe_levels,
                                               config.pe_reference, config.pe_unseen, rng));
}

namespace {

ActionIndex sample_index(const std::vector<double>& probs, RngStream& rng) {
    double u = rng.next_double();
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        u -= probs[i];
        if (u <= 0.0) return i;
    }
    return probs.size() - 1;
}

StateIndex belief_argmax(const Belief& b) {
    StateIndex best = 0;
    for (StateIndex s = 1; s < b.size(); ++s)
        if (b.probs[s] > b.probs[best]) best = s;
    return best;
}

double safe_cosine(const std::vector<double>& v, const std::vector<double>& w) {
    double nv = 0.0, nw = 0.0;
    for (double x : v) nv += x * x;
    for (double x : w) nw += x * x;
    if (nv == 0.0 || nw == 0.0) return 0.0;
    return cosine_similarity(v, w);
}

}  // namespace

TrajectoryRecord rollout(const TaskEnv& env, const ExperimentConfig& config, std::size_t index) {
    const std::size_t n = env.space.size();
    const ObservationModel model = env.observation_model(config.eta);
    RngStream rng(config.seed, index);
    const std::uint64_t rule_seed =
        RngStream::mix(config.truncation.seed ^ RngStream::mix(config.seed + 0x51ed * index + 1));
    TruncationRule rule = config.truncation;
    rule.seed = rule_seed;

    TrajectoryRecord rec;
    rec.index = index;
    rec.seed = config.seed;
    rec.initial_belief_true = 1.0 / static_cast<double>(n);
    rec.initial_hypothesis_count = n;

    Belief agent = Belief::uniform(n);
    Belief oracle = Belief::uniform(n);
    HypothesisSet hypotheses = init_full(env.space);
    std::vector<TurnSignal> signals;
    std::vector<std::size_t> h_sizes{n};
    std::vector<double> pe_truth;
    double prev_similarity = 0.0;
    if (env.task == "pe") {
        pe_truth = env.state_vector(env.space.true_state_index);
        prev_similarity = safe_cosine(env.state_vector(belief_argmax(agent)), pe_truth);
    }

    bool answered = false;
    auto submit_answer = [&](StateIndex s) {
        rec.answer = env.space.states[s];
        rec.success = (s == env.space.true_state_index);
        if (env.task == "pe") {
            const auto v = env.state_vector(s);
            double nv = 0.0;
            for (double x : v) nv += x * x;
            double nw = 0.0;
            for (double x : pe_truth) nw += x * x;
            rec.reward = (nv == 0.0 || nw == 0.0) ? 0.0
                                                  : static_cast<double>(binary_similarity(v, pe_truth));
        } else {
            rec.reward = rec.success ? 1.0 : 0.0;
        }
        answered = true;
    };

    std::size_t turn = 0;
    // GN episodes open with the instance's scripted guess
    std::optional<ActionIndex> forced_action;
    if (env.task == "gn" && env.initial_action) forced_action = *env.initial_action;

    while (turn < config.horizon && !answered) {
        // confident agents submit instead of querying
        const StateIndex top = belief_argmax(agent);
        if (agent.probs[top] >= config.answer_threshold) {
            submit_answer(top);
            break;
        }

        ActionIndex action;
        if (forced_action) {
            action = *forced_action;
            forced_action.reset();
        } else {
            const std::vector<double> pi =
                policy_distribution(config.policy, agent, env.num_actions(), env.space, model, turn);
            action = sample_index(pi, rng);
        }
        const ObsIndex obs = env.evaluate(env.space.true_state_index, action);
        ++turn;

        // track the consistent set before updating beliefs
        const bool consistent =
            env.task == "gn" ? hypotheses.contains(action) : true;
        HypothesisSet next_h = filter_consistent(hypotheses, action, obs, env.evaluate);
        if (next_h.members.empty())
            throw std::runtime_error("rollout: empty hypothesis set (evaluator inconsistency)");
        const double d = static_cast<double>(progress(hypotheses, next_h));

        agent = corrupted_update(config.corruption, agent, action, obs, env.space, model,
                                 config.psi_max);
        oracle = bayes_update(oracle, action, obs, model);
        hypotheses = std::move(next_h);
        h_sizes.push_back(hypotheses.size());

        TurnSignal signal;
        signal.progress = d;
        signal.feedback_label = env.observation_names[obs];
        signal.action_consistent = consistent;
        if (env.task == "pe") {
            const double sim = safe_cosine(env.state_vector(belief_argmax(agent)), pe_truth);
            signal.similarity_gain = sim - prev_similarity;
            prev_similarity = sim;
        }
        // query identity as a one-hot embedding: repeats have cosine exactly 1
        if (config.truncation.kind == RuleKind::kSimilarityAlpha) {
            std::vector<double> onehot(env.num_actions(), 0.0);
            onehot[action] = 1.0;
            signal.query_vector = std::move(onehot);
        }
        signals.push_back(std::move(signal));

        const bool verdict = evaluate_rule(rule, signals, h_sizes, turn);

        TurnRecord tr;
        tr.action = env.action_names[action];
        tr.observation = env.observation_names[obs];
        tr.agent_belief_true = agent.probs[env.space.true_state_index];
        tr.oracle_belief_true = oracle.probs[env.space.true_state_index];
        tr.psi_agent = potential(agent, env.space, config.psi_max);
        tr.psi_oracle = potential(oracle, env.space, config.psi_max);
        tr.hypothesis_count = hypotheses.size();
        tr.progress = d;
        tr.truncation_verdict = verdict;
        rec.turns.push_back(std::move(tr));

        // a winning interaction (GN: guess == secret) ends the episode
        if (env.winning_action && env.winning_action(action)) {
            submit_answer(action);
            break;
        }
        if (verdict) {
            rec.truncated = true;
            rec.t_s = rec.turns.size();
            submit_answer(belief_argmax(agent));
            break;
        }
    }

    if (!answered) submit_answer(belief_argmax(agent));
    if (!rec.truncated) rec.t_s = rec.turns.size();
    return rec;
}

ExperimentSummary summarize(const std::vector<TrajectoryRecord>& trajectories) {
    ExperimentSummary s;
    s.rollouts = trajectories.size();
    for (const auto& t : trajectories) {
        s.success_rate += t.success ? 1.0 : 0.0;
        s.total_turns += t.num_turns();
        s.truncation_frequency += t.truncated ? 1.0 : 0.0;
        s.mean_reward += t.reward;
    }
    if (!trajectories.empty()) {
        const double n = static_cast<double>(trajectories.size());
        s.success_rate /= n;
        s.mean_turns = static_cast<double>(s.total_turns) / n;
        s.truncation_frequency /= n;
        s.mean_reward /= n;
    }
    return s;
}

nlohmann::json compute_constants_report(const ExperimentConfig& config,
                                        const std::vector<TrajectoryRecord>& trajectories) {
    nlohmann::json report;
    TaskEnv env = build_env(config, 0);
    const ObservationModel model = env.observation_model(config.eta);
    const std::size_t n = env.space.size();

    TheoryConstants consts;
    consts.eta = config.eta;
    consts.Psi0 = std::log(static_cast<double>(n));
    report["eta"] = consts.eta;
    report["Psi0"] = consts.Psi0;

    // policy sensitivity estimate
    RngStream pair_rng(config.seed ^ 0xa5a5a5a5ull);
    const auto pairs = sample_belief_pairs(200, n, pair_rng);
    const LipschitzEstimate lpi = estimate_lipschitz_Lpi(config.policy, pairs, env.num_actions(),
                                                         env.space, model);
    consts.L_pi = lpi.value;
    report["L_pi"] = consts.L_pi;
    report["L_pi_pairs"] = lpi.pairs_used;

    // update-error growth fit on the fixed-support probe family
    double psi_hi = 0.8 * consts.Psi0;
    if (config.fit_psi_max > 0.0) psi_hi = std::min(psi_hi, config.fit_psi_max);
    std::vector<double> grid;
    for (int i = 0; i <= 11; ++i) grid.push_back(psi_hi * static_cast<double>(i) / 11.0);
    const std::size_t support = std::min<std::size_t>(16, n);
    const auto family = potential_family(env.space, support, grid);
    PolicyFn policy_fn = [&](const Belief& b) {
        return policy_distribution(config.policy, b, env.num_actions(), env.space, model);
    };
    UpdateFn updater = [&](const Belief& b, ActionIndex a, ObsIndex o) {
        return corrupted_update(config.corruption, b, a, o, env.space, model, config.psi_max);
    };
    std::vector<double> psis, errors;
    for (const auto& b : family) {
        psis.push_back(potential(b, env.space, config.psi_max));
        errors.push_back(update_error(b, policy_fn, updater, env.space, model).value);
    }
    report["fit_psis"] = psis;
    report["fit_errors"] = errors;
    bool have_fit = false;
    try {
        const GrowthFit fit = fit_update_error_growth(psis, errors, 0.0);
        consts.m_theta = fit.m_theta;
        consts.c0 = fit.c0;
        consts.U0 = fit.U0;
        report["m_theta"] = fit.m_theta;
        report["c0"] = fit.c0;
        report["U0"] = fit.U0;
        report["fit_residual_rms"] = fit.residual_rms;
        have_fit = fit.m_theta > 0.0;
    } catch (const std::exception& e) {
        report["fit_error"] = e.what();
    }

    // measured oracle floor over the horizon
    double mu = std::numeric_limits<double>::infinity();
    for (const auto& t : trajectories)
        for (double psi : t.psi_series(true, config.psi_max)) mu = std::min(mu, psi);
    if (!trajectories.empty()) {
        consts.mu = mu;
        report["mu"] = mu;
    }

    if (config.eta > 0.0) {
        consts.bbar = compute_bbar(config.eta, consts.L_pi);
        report["bbar"] = consts.bbar;
        if (have_fit) {
            consts.U = compute_threshold_U(consts);
            consts.delta = consts.m_theta * consts.mu - (consts.c0 + consts.bbar);
            report["U"] = consts.U;
            report["delta"] = consts.delta;
            if (consts.delta > 0.0) {
                const double delta1 = 0.0;  // agent and oracle share the uniform prior
                report["hitting_time_bound"] =
                    hitting_time_bound(consts.m_theta, consts.U, consts.delta, delta1);
            }
        }
    }

    // empirical trap-entry statistics (window 3, drift floor 1e-6)
    std::size_t entered = 0;
    std::vector<std::int64_t> entries;
    for (const auto& t : trajectories) {
        const auto entry = detect_btr_entry(t.psi_series(false, config.psi_max), 3, 1e-6);
        entries.push_back(entry ? static_cast<std::int64_t>(*entry) : -1);
        if (entry) ++entered;
    }
    report["btr_entry_fraction"] =
        trajectories.empty() ? 0.0
                             : static_cast<double>(entered) / static_cast<double>(trajectories.size());
    return report;
}

namespace {

void run_parallel(std::size_t jobs, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs);
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentResult run_experiment_in_memory(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.trajectories.resize(config.rollouts);

    const bool shared_env = !config.fresh_instance_per_rollout ||
                            (!config.instance.is_null() && !config.instance.empty());
    TaskEnv base_env;
    if (shared_env) base_env = build_env(config, 0);

    run_parallel(config.rollouts, config.threads, [&](std::size_t i) {
        if (shared_env) {
            result.trajectories[i] = rollout(base_env, config, i);
        } else {
            const TaskEnv env = build_env(config, i);
            result.trajectories[i] = rollout(env, config, i);
        }
    });

    result.summary = summarize(result.trajectories);
    result.constants = compute_constants_report(config, result.trajectories);
    return result;
}

namespace {

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    ExperimentResult result = run_experiment_in_memory(config);
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path dir(config.output_dir);

    std::string jsonl;
    for (const auto& t : result.trajectories) {
        jsonl += t.to_json().dump();
        jsonl += '\n';
    }
    write_file((dir / "trajectories.jsonl").string(), jsonl);

    std::string csv = "trajectory,t,delta,a_hat,t_s,a_hat_pre,s_pre,s_tail\n";
    for (const auto& t : result.trajectories) {
        if (t.turns.empty()) continue;
        std::vector<double> beliefs = t.belief_true_series();
        std::vector<double> values = calibrated_values(beliefs, config.calibration);
        values.push_back(0.0);  // terminal bootstrap
        std::vector<double> rewards(t.num_turns(), 0.0);
        rewards.back() = t.reward;
        const std::vector<double> deltas = td_errors(rewards, values, config.gamma);
        for (const auto& row : advantage_report(deltas, config.gamma, config.lambda, t.t_s)) {
            csv += std::to_string(t.index) + "," + std::to_string(row.t) + "," +
                   format_double(row.delta) + "," + format_double(row.a_hat) + "," +
                   std::to_string(row.t_s) + "," + format_double(row.a_hat_pre) + "," +
                   format_double(row.s_pre) + "," + format_double(row.s_tail) + "\n";
        }
    }
    write_file((dir / "advantage.csv").string(), csv);

    write_file((dir / "constants.json").string(), result.constants.dump(2) + "\n");

    std::string summary =
        "rollouts,success_rate,mean_turns,total_turns,truncation_frequency,mean_reward\n";
    summary += std::to_string(result.summary.rollouts) + "," +
               format_double(result.summary.success_rate) + "," +
               format_double(result.summary.mean_turns) + "," +
               std::to_string(result.summary.total_turns) + "," +
               format_double(result.summary.truncation_frequency) + "," +
               format_double(result.summary.mean_reward) + "\n";
    write_file((dir / "summary.csv").string(), summary);
    return result.summary;
}

}  // namespace beliefsim
