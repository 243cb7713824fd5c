#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beliefsim/advantage.hpp"
#include "beliefsim/agents.hpp"
#include "beliefsim/btr.hpp"
#include "beliefsim/circuit.hpp"
#include "beliefsim/environments.hpp"
#include "beliefsim/hypothesis.hpp"
#include "beliefsim/rollout.hpp"
#include "beliefsim/truncation.hpp"
#include "beliefsim/verify.hpp"

namespace py = pybind11;
using namespace beliefsim;

namespace {

Belief belief_from(const std::vector<double>& probs) {
    Belief b{probs};
    b.validate();
    return b;
}

// Enumerable task wrapper: belief filtering, informativeness and hypothesis
// tracking against one concrete instance.
class SimTask {
public:
    SimTask(const std::string& instance_json, double eta) {
        const nlohmann::json j = nlohmann::json::parse(instance_json);
        const std::string task = j.at("task").get<std::string>();
        if (task == "gn")
            env_ = make_gn_env(gn_from_json(j));
        else if (task == "cd")
            env_ = make_cd_env(cd_from_json(j));
        else if (task == "pe")
            env_ = make_pe_env(pe_from_json(j));
        else
            throw std::invalid_argument("unknown task: " + task);
        model_ = env_.observation_model(eta);
    }

    std::size_t num_states() const { return env_.space.size(); }
    std::size_t num_actions() const { return env_.num_actions(); }
    std::size_t true_state() const { return env_.space.true_state_index; }
    std::vector<std::string> state_names() const { return env_.space.states; }
    std::vector<std::string> action_names() const { return env_.action_names; }
    std::vector<std::string> observation_names() const { return env_.observation_names; }
    std::optional<std::size_t> initial_action() const { return env_.initial_action; }

    std::size_t evaluate(std::size_t state, std::size_t action) const {
        return env_.evaluate(state, action);
    }

    std::vector<double> uniform_belief() const { return Belief::uniform(env_.space.size()).probs; }

    std::vector<double> bayes(const std::vector<double>& probs, std::size_t action,
                              std::size_t obs) const {
        return bayes_update(belief_from(probs), action, obs, model_).probs;
    }

    std::vector<double> corrupted(const std::vector<double>& probs, std::size_t action,
                                  std::size_t obs, const std::string& kind, double eps0,
                                  double slope, double eps_cap) const {
        CorruptionSpec spec;
        spec.kind = kind == "none"          ? CorruptionKind::kNone
                    : kind == "uniform_mix" ? CorruptionKind::kUniformMix
                                            : CorruptionKind::kPsiCoupledMix;
        spec.eps0 = eps0;
        spec.slope = slope;
        spec.eps_cap = eps_cap;
        spec.validate();
        return corrupted_update(spec, belief_from(probs), action, obs, env_.space, model_).probs;
    }

    double info_gain(const std::vector<double>& probs, std::size_t action) const {
        return informativeness(belief_from(probs), action, env_.space, model_);
    }

    double psi(const std::vector<double>& probs, double psi_max) const {
        return potential(belief_from(probs), env_.space, psi_max);
    }

    std::vector<std::size_t> filter(const std::vector<std::size_t>& members, std::size_t action,
                                    std::size_t obs) const {
        HypothesisSet h;
        h.members = members;
        return filter_consistent(h, action, obs, env_.evaluate).members;
    }

    std::vector<std::size_t> full_hypothesis_set() const { return init_full(env_.space).members; }

private:
    TaskEnv env_;
    ObservationModel model_;
};

std::string make_instance_json(const std::string& task, std::uint64_t seed, int gn_digits,
                               int gn_symbols, int cd_candidates, int cd_labels, int cd_inputs,
                               int pe_dimension, int pe_levels, int pe_reference, int pe_unseen) {
    RngStream rng(seed);
    if (task == "gn")
        return gn_to_json(make_random_gn_instance(gn_digits, gn_symbols, rng)).dump();
    if (task == "cd")
        return cd_to_json(make_random_cd_instance(cd_candidates, cd_labels, cd_inputs, rng)).dump();
    if (task == "pe")
        return pe_to_json(
                   make_random_pe_instance(pe_dimension, pe_levels, pe_reference, pe_unseen, rng))
            .dump();
    throw std::invalid_argument("unknown task: " + task);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "belief filtering, trap analysis and trajectory truncation";

    py::class_<SimTask>(m, "SimTask",
                        "one enumerable task instance with belief and hypothesis machinery")
        .def(py::init<const std::string&, double>(), py::arg("instance_json"), py::arg("eta") = 0.0)
        .def_property_readonly("num_states", &SimTask::num_states)
        .def_property_readonly("num_actions", &SimTask::num_actions)
        .def_property_readonly("true_state", &SimTask::true_state)
        .def_property_readonly("state_names", &SimTask::state_names)
        .def_property_readonly("action_names", &SimTask::action_names)
        .def_property_readonly("observation_names", &SimTask::observation_names)
        .def_property_readonly("initial_action", &SimTask::initial_action)
        .def("evaluate", &SimTask::evaluate, py::arg("state"), py::arg("action"))
        .def("uniform_belief", &SimTask::uniform_belief)
        .def("bayes_update", &SimTask::bayes, py::arg("belief"), py::arg("action"),
             py::arg("observation"))
        .def("corrupted_update", &SimTask::corrupted, py::arg("belief"), py::arg("action"),
             py::arg("observation"), py::arg("kind") = "uniform_mix", py::arg("eps0") = 0.0,
             py::arg("slope") = 0.0, py::arg("eps_cap") = 1.0)
        .def("informativeness", &SimTask::info_gain, py::arg("belief"), py::arg("action"))
        .def("potential", &SimTask::psi, py::arg("belief"), py::arg("psi_max") = kDefaultPsiMax)
        .def("filter_consistent", &SimTask::filter, py::arg("members"), py::arg("action"),
             py::arg("observation"))
        .def("full_hypothesis_set", &SimTask::full_hypothesis_set);

    m.def("make_instance", &make_instance_json, py::arg("task"), py::arg("seed") = 1,
          py::arg("gn_digits") = 3, py::arg("gn_symbols") = 5, py::arg("cd_candidates") = 10,
          py::arg("cd_labels") = 2, py::arg("cd_inputs") = 2, py::arg("pe_dimension") = 3,
          py::arg("pe_levels") = 6, py::arg("pe_reference") = 6, py::arg("pe_unseen") = 3,
          "generate a random instance document (JSON text)");
    m.def("gn_preset_names", &gn_preset_names);
    m.def(
        "make_gn_preset",
        [](const std::string& name, std::uint64_t seed) {
            RngStream rng(seed);
            return gn_to_json(make_gn_preset(name, rng)).dump();
        },
        py::arg("name"), py::arg("seed") = 1);

    m.def(
        "gn_feedback",
        [](const std::vector<int>& guess, const std::vector<int>& secret) {
            const GnFeedback fb = gn_feedback(guess, secret);
            return std::make_pair(fb.exact, fb.misplaced);
        },
        py::arg("guess"), py::arg("secret"));
    m.def(
        "gn_state_count", [](int a, int b) { return gn_enumerate_states(a, b).size(); },
        py::arg("num_digits"), py::arg("num_symbols"));
    m.def(
        "cd_eval",
        [](const std::string& text, int num_inputs, const std::vector<int>& bits) {
            return Circuit::parse(text, num_inputs).eval(bits);
        },
        py::arg("circuit"), py::arg("num_inputs"), py::arg("bits"));
    m.def("pe_score", &pe_score, py::arg("weights"), py::arg("attributes"));
    m.def(
        "pe_compare",
        [](const std::vector<double>& w, const std::vector<double>& a,
           const std::vector<double>& b, double tie_eps) {
            return pref_answer_name(pe_compare(w, a, b, tie_eps));
        },
        py::arg("weights"), py::arg("movie_a"), py::arg("movie_b"), py::arg("tie_eps") = 1e-9);
    m.def(
        "mr_recommend",
        [](const std::vector<double>& w,
           const std::map<std::string, std::vector<double>>& movies) {
            std::vector<NamedVector> pool(movies.begin(), movies.end());
            return mr_recommend(w, pool);
        },
        py::arg("weights"), py::arg("movies"));
    m.def("cosine_similarity", &cosine_similarity, py::arg("v"), py::arg("w"));
    m.def("binary_similarity", &binary_similarity, py::arg("v"), py::arg("v_star"),
          py::arg("threshold") = 0.88);
    m.def("l1_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
        return l1_distance(Belief{a}, Belief{b});
    });

    // advantage estimation
    m.def("td_errors", &td_errors, py::arg("rewards"), py::arg("values"), py::arg("gamma") = 1.0);
    m.def("gae", &gae, py::arg("deltas"), py::arg("gamma"), py::arg("lambda_"), py::arg("t"));
    m.def("truncated_gae", &truncated_gae, py::arg("deltas"), py::arg("gamma"), py::arg("lambda_"),
          py::arg("t"), py::arg("t_s"));
    m.def(
        "geometric_sums",
        [](std::size_t t, std::size_t t_s, std::size_t horizon, double gamma, double lambda) {
            const GeometricSums s = geometric_sums(t, t_s, horizon, gamma, lambda);
            return std::make_pair(s.pre, s.tail);
        },
        py::arg("t"), py::arg("t_s"), py::arg("horizon"), py::arg("gamma") = 1.0,
        py::arg("lambda_") = 1.0);
    m.def("inversion_threshold", &inversion_threshold, py::arg("t"), py::arg("t_s"),
          py::arg("horizon"), py::arg("gamma") = 1.0, py::arg("lambda_") = 1.0);

    // trap analysis
    m.def("compute_bbar", &compute_bbar, py::arg("eta"), py::arg("l_pi"));
    m.def(
        "compute_threshold_u",
        [](double u0, double psi0, double bbar, double c0, double m_theta) {
            TheoryConstants consts;
            consts.U0 = u0;
            consts.Psi0 = psi0;
            consts.bbar = bbar;
            consts.c0 = c0;
            consts.m_theta = m_theta;
            return compute_threshold_U(consts);
        },
        py::arg("u0"), py::arg("psi0"), py::arg("bbar"), py::arg("c0"), py::arg("m_theta"));
    m.def("hitting_time_bound", &hitting_time_bound, py::arg("m_theta"), py::arg("u"),
          py::arg("delta"), py::arg("delta1"));
    m.def("detect_btr_entry", &detect_btr_entry, py::arg("psi_series"), py::arg("window") = 3,
          py::arg("min_drift") = 1e-6);

    // truncation rules
    m.def(
        "t3_check",
        [](const std::vector<double>& progress, std::size_t k, double delta_min, std::size_t t) {
            std::vector<TurnSignal> signals;
            for (double p : progress) {
                TurnSignal s;
                s.progress = p;
                signals.push_back(s);
            }
            return t3_check(signals, k, delta_min, t);
        },
        py::arg("progress"), py::arg("k"), py::arg("delta_min"), py::arg("t"));
    m.def("gn_consistency_rule", &gn_consistency_rule, py::arg("action_consistent"));
    m.def("cd_stall_rule", &cd_stall_rule, py::arg("size_history"), py::arg("k") = 3);
    m.def("streak_unknown_rule", &streak_unknown_rule, py::arg("labels"), py::arg("k") = 5,
          py::arg("unknown") = "Unknown");
    m.def("pe_sim_drop_rule", &pe_sim_drop_rule, py::arg("sim_gains"), py::arg("k") = 2);
    m.def("similarity_alpha_rule", &similarity_alpha_rule, py::arg("query_vectors"),
          py::arg("alpha"));
    m.def("random_beta_rule", &random_beta_rule, py::arg("beta"), py::arg("seed"), py::arg("t"));

    // experiment runner
    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            const ExperimentConfig config =
                ExperimentConfig::from_json(nlohmann::json::parse(config_json));
            const ExperimentSummary s = run_experiment(config);
            py::dict out;
            out["rollouts"] = s.rollouts;
            out["success_rate"] = s.success_rate;
            out["mean_turns"] = s.mean_turns;
            out["total_turns"] = s.total_turns;
            out["truncation_frequency"] = s.truncation_frequency;
            out["mean_reward"] = s.mean_reward;
            return out;
        },
        py::arg("config_json"), "run rollouts and write reports; returns the summary");
    m.def("verify_suite_names", &verify_suite_names);
    m.def(
        "run_verify_suite",
        [](const std::string& name) {
            const CheckResult r = run_verify_suite(name);
            return std::make_tuple(r.pass, r.name, r.details);
        },
        py::arg("name"));
}
