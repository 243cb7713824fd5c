#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beliefsim/belief.hpp"
#include "beliefsim/circuit.hpp"
#include "beliefsim/rng.hpp"

namespace beliefsim {

// ---------------------------------------------------------------------------
// GuessNumbers: deduce a hidden sequence of distinct symbols from 1..b via
// positional feedback.

struct GnFeedback {
    int exact = 0;      // correct value, correct position
    int misplaced = 0;  // correct value, wrong position

    bool operator==(const GnFeedback&) const = default;
};

struct GuessNumbersInstance {
    int num_digits = 0;   // a
    int num_symbols = 0;  // b >= a
    std::vector<int> secret;
    std::vector<int> initial_guess;
    GnFeedback initial_feedback;

    void validate() const;
};

GnFeedback gn_feedback(const std::vector<int>& guess, const std::vector<int>& secret);

// All ordered a-permutations of {1..b} in lexicographic order; |S| = b!/(b-a)!.
std::vector<std::vector<int>> gn_codes(int num_digits, int num_symbols);
StateSpace gn_enumerate_states(int num_digits, int num_symbols);
std::string gn_code_name(const std::vector<int>& code);

// Named (a, b, x0, y0) presets; an instance is drawn uniformly among those
// whose fixed first guess yields feedback (x0, y0).
std::vector<std::string> gn_preset_names();
GuessNumbersInstance make_gn_preset(const std::string& name, RngStream& rng);
GuessNumbersInstance make_random_gn_instance(int num_digits, int num_symbols, RngStream& rng);

// ---------------------------------------------------------------------------
// CircuitDecoding: identify hidden boolean circuits from a candidate pool by
// querying one labeled circuit per turn with chosen input bits.

struct CircuitInstance {
    int num_inputs = 0;
    std::vector<std::string> candidates;         // prefix-serialized circuits
    std::vector<std::string> labels;             // "A", "B", ...
    std::vector<std::size_t> hidden_assignment;  // candidate index per label
    bool distinct_circuits = false;

    void validate() const;
};

int cd_eval(const Circuit& candidate, const std::vector<int>& input_bits);
int cd_observe(const CircuitInstance& instance, const std::string& label,
               const std::vector<int>& input_bits);

CircuitInstance make_random_cd_instance(int num_candidates, int num_labels, int num_inputs,
                                        RngStream& rng, bool distinct_circuits = false);

// ---------------------------------------------------------------------------
// PreferenceEstimation / MovieRecommendation: infer a hidden weight vector
// from pairwise comparisons of reference movies scored by weighted sums.

enum class PrefAnswer { kYes, kNo, kEqual };
std::string pref_answer_name(PrefAnswer a);

using NamedVector = std::pair<std::string, std::vector<double>>;

struct PreferenceInstance {
    std::vector<double> weights;  // hidden w in [0,1]^n, on the belief grid
    std::vector<NamedVector> reference_movies;
    std::vector<NamedVector> unseen_movies;
    int grid_levels = 6;
    double tie_eps = 1e-9;

    void validate() const;
};

double pe_score(const std::vector<double>& weights, const std::vector<double>& attributes);
PrefAnswer pe_compare(const std::vector<double>& weights, const std::vector<double>& movie_a,
                      const std::vector<double>& movie_b, double tie_eps = 1e-9);
// argmax of pe_score; ties broken by lexicographically smallest name
std::string mr_recommend(const std::vector<double>& weights,
                         const std::vector<NamedVector>& unseen_movies);

// Uniform grid over [0,1]^dimension with `levels` points per axis.
StateSpace pe_grid_states(int dimension, int levels, std::size_t cap = 2000000);
std::vector<double> pe_grid_vector(int dimension, int levels, StateIndex index);

double cosine_similarity(const std::vector<double>& v, const std::vector<double>& w);
int binary_similarity(const std::vector<double>& v, const std::vector<double>& v_star,
                      double threshold = 0.88);

PreferenceInstance make_random_pe_instance(int dimension, int levels, int num_reference,
                                           int num_unseen, RngStream& rng);

// ---------------------------------------------------------------------------
// Bundled enumerable task: state space, action list, observation alphabet and
// the deterministic evaluator feeding ObservationModel.

struct TaskEnv {
    StateSpace space;
    std::vector<std::string> action_names;
    std::vector<std::string> observation_names;
    std::function<ObsIndex(StateIndex, ActionIndex)> evaluate;

    // GN only: action that ends the episode successfully (guess == secret)
    std::function<bool(ActionIndex)> winning_action;
    // GN only: the instance's scripted first guess
    std::optional<ActionIndex> initial_action;
    // PE only: grid vector for a state (similarity signals, final answer)
    std::function<std::vector<double>(StateIndex)> state_vector;
    // task tag: "gn", "cd", or "pe"
    std::string task;

    std::size_t num_actions() const { return action_names.size(); }
    ObservationModel observation_model(double eta) const;
};

TaskEnv make_gn_env(const GuessNumbersInstance& instance);
TaskEnv make_cd_env(const CircuitInstance& instance);
TaskEnv make_pe_env(const PreferenceInstance& instance);

// JSON instance documents (schema documented in the README); parse/serialize
// round-trips are byte-stable under the canonical key ordering.
nlohmann::json gn_to_json(const GuessNumbersInstance&);
nlohmann::json cd_to_json(const CircuitInstance&);
nlohmann::json pe_to_json(const PreferenceInstance&);
GuessNumbersInstance gn_from_json(const nlohmann::json&);
CircuitInstance cd_from_json(const nlohmann::json&);
PreferenceInstance pe_from_json(const nlohmann::json&);

}  // namespace beliefsim
