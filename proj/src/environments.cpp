#include "beliefsim/environments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace beliefsim {

// ---------------------------------------------------------------------------
// GuessNumbers

void GuessNumbersInstance::validate() const {
    if (num_digits < 1 || num_symbols < num_digits)
        throw std::invalid_argument("GuessNumbersInstance: need 1 <= a <= b");
    auto check_code = [&](const std::vector<int>& code, const char* what) {
        if (static_cast<int>(code.size()) != num_digits)
            throw std::invalid_argument(std::string("GuessNumbersInstance: bad length for ") + what);
        std::set<int> seen;
        for (int d : code) {
            if (d < 1 || d > num_symbols)
                throw std::invalid_argument(std::string("GuessNumbersInstance: symbol out of range in ") + what);
            if (!seen.insert(d).second)
                throw std::invalid_argument(std::string("GuessNumbersInstance: repeated symbol in ") + what);
        }
    };
    check_code(secret, "secret");
    check_code(initial_guess, "initial_guess");
    if (initial_guess == secret)
        throw std::invalid_argument("GuessNumbersInstance: initial guess equals secret");
    if (!(gn_feedback(initial_guess, secret) == initial_feedback))
        throw std::invalid_argument("GuessNumbersInstance: initial feedback inconsistent");
}

GnFeedback gn_feedback(const std::vector<int>& guess, const std::vector<int>& secret) {
    if (guess.size() != secret.size())
        throw std::invalid_argument("gn_feedback: length mismatch");
    GnFeedback fb;
    int max_symbol = 0;
    for (int d : secret) max_symbol = std::max(max_symbol, d);
    for (int d : guess) max_symbol = std::max(max_symbol, d);
    std::vector<unsigned char> in_secret(static_cast<std::size_t>(max_symbol) + 1, 0);
    for (int d : secret) {
        if (d < 0) throw std::invalid_argument("gn_feedback: negative symbol");
        in_secret[static_cast<std::size_t>(d)] = 1;
    }
    for (std::size_t i = 0; i < guess.size(); ++i) {
        if (guess[i] < 0) throw std::invalid_argument("gn_feedback: negative symbol");
        if (guess[i] == secret[i])
            ++fb.exact;
        else if (in_secret[static_cast<std::size_t>(guess[i])])
            ++fb.misplaced;
    }
    return fb;
}

std::vector<std::vector<int>> gn_codes(int num_digits, int num_symbols) {
    if (num_digits < 1 || num_symbols < num_digits)
        throw std::invalid_argument("gn_codes: need 1 <= a <= b");
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    std::vector<bool> used(static_cast<std::size_t>(num_symbols) + 1, false);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(current.size()) == num_digits) {
            out.push_back(current);
            return;
        }
        for (int d = 1; d <= num_symbols; ++d) {
            if (used[static_cast<std::size_t>(d)]) continue;
            used[static_cast<std::size_t>(d)] = true;
            current.push_back(d);
            rec();
            current.pop_back();
            used[static_cast<std::size_t>(d)] = false;
        }
    };
    rec();
    return out;
}

std::string gn_code_name(const std::vector<int>& code) {
    std::ostringstream os;
    bool wide = false;
    for (int d : code) wide = wide || d > 9;
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (wide && i) os << ',';
        os << code[i];
    }
    return os.str();
}

StateSpace gn_enumerate_states(int num_digits, int num_symbols) {
    StateSpace space;
    for (const auto& code : gn_codes(num_digits, num_symbols))
        space.states.push_back(gn_code_name(code));
    space.true_state_index = 0;
    return space;
}

namespace {

struct GnPreset {
    int a, b, x0, y0;
};

const std::vector<std::pair<std::string, GnPreset>>& gn_presets() {
    static const std::vector<std::pair<std::string, GnPreset>> presets = {
        {"gn-3-4-0-3", {3, 4, 0, 3}}, {"gn-3-4-2-0", {3, 4, 2, 0}}, {"gn-3-4-1-2", {3, 4, 1, 2}},
        {"gn-3-5-1-2", {3, 5, 1, 2}}, {"gn-3-5-0-3", {3, 5, 0, 3}}, {"gn-3-5-1-0", {3, 5, 1, 0}},
        {"gn-3-5-2-0", {3, 5, 2, 0}}, {"gn-4-4-0-4", {4, 4, 0, 4}}, {"gn-4-5-3-0", {4, 5, 3, 0}},
    };
    return presets;
}

}  // namespace

std::vector<std::string> gn_preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, preset] : gn_presets()) names.push_back(name);
    return names;
}

GuessNumbersInstance make_gn_preset(const std::string& name, RngStream& rng) {
    const GnPreset* preset = nullptr;
    for (const auto& [n, p] : gn_presets())
        if (n == name) preset = &p;
    if (!preset) throw std::invalid_argument("unknown GN preset: " + name);

    const auto codes = gn_codes(preset->a, preset->b);
    const GnFeedback want{preset->x0, preset->y0};
    // draw (secret, guess) uniformly among pairs with the preset feedback
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const auto& secret = codes[rng.next_below(codes.size())];
        const auto& guess = codes[rng.next_below(codes.size())];
        if (guess == secret) continue;
        if (gn_feedback(guess, secret) == want) {
            GuessNumbersInstance inst{preset->a, preset->b, secret, guess, want};
            inst.validate();
            return inst;
        }
    }
    throw std::runtime_error("make_gn_preset: no instance with feedback (" +
                             std::to_string(preset->x0) + "," + std::to_string(preset->y0) +
                             ") found for " + name);
}

GuessNumbersInstance make_random_gn_instance(int num_digits, int num_symbols, RngStream& rng) {
    const auto codes = gn_codes(num_digits, num_symbols);
    if (codes.size() < 2)
        throw std::invalid_argument("make_random_gn_instance: need at least two codes");
    const auto& secret = codes[rng.next_below(codes.size())];
    while (true) {
        const auto& guess = codes[rng.next_below(codes.size())];
        if (guess == secret) continue;
        GuessNumbersInstance inst{num_digits, num_symbols, secret, guess,
                                  gn_feedback(guess, secret)};
        inst.validate();
        return inst;
    }
}

// ---------------------------------------------------------------------------
// CircuitDecoding

void CircuitInstance::validate() const {
    if (candidates.empty()) throw std::invalid_argument("CircuitInstance: no candidates");
    if (labels.empty()) throw std::invalid_argument("CircuitInstance: no labels");
    if (labels.size() != hidden_assignment.size())
        throw std::invalid_argument("CircuitInstance: labels/assignment size mismatch");
    for (std::size_t idx : hidden_assignment)
        if (idx >= candidates.size())
            throw std::invalid_argument("CircuitInstance: hidden assignment out of range");
    if (distinct_circuits) {
        std::set<std::size_t> unique(hidden_assignment.begin(), hidden_assignment.end());
        if (unique.size() != hidden_assignment.size())
            throw std::invalid_argument("CircuitInstance: repeated circuit with distinct_circuits");
    }
    for (const auto& c : candidates) Circuit::parse(c, num_inputs);
}

int cd_eval(const Circuit& candidate, const std::vector<int>& input_bits) {
    return candidate.eval(input_bits);
}

int cd_observe(const CircuitInstance& instance, const std::string& label,
               const std::vector<int>& input_bits) {
    for (std::size_t i = 0; i < instance.labels.size(); ++i) {
        if (instance.labels[i] == label) {
            Circuit c = Circuit::parse(instance.candidates[instance.hidden_assignment[i]],
                                       instance.num_inputs);
            return c.eval(input_bits);
        }
    }
    throw std::invalid_argument("cd_observe: unknown label " + label);
}

namespace {

// random expression tree of bounded depth; leaves are input variables
std::string random_circuit_text(int num_inputs, int depth, RngStream& rng) {
    if (depth <= 0 || rng.next_below(4) == 0)
        return "x" + std::to_string(rng.next_below(static_cast<std::uint64_t>(num_inputs)));
    switch (rng.next_below(4)) {
        case 0:
            return "NOT(" + random_circuit_text(num_inputs, depth - 1, rng) + ")";
        case 1:
            return "AND(" + random_circuit_text(num_inputs, depth - 1, rng) + "," +
                   random_circuit_text(num_inputs, depth - 1, rng) + ")";
        case 2:
            return "OR(" + random_circuit_text(num_inputs, depth - 1, rng) + "," +
                   random_circuit_text(num_inputs, depth - 1, rng) + ")";
        default:
            return "XOR(" + random_circuit_text(num_inputs, depth - 1, rng) + "," +
                   random_circuit_text(num_inputs, depth - 1, rng) + ")";
    }
}

}  // namespace

CircuitInstance make_random_cd_instance(int num_candidates, int num_labels, int num_inputs,
                                        RngStream& rng, bool distinct_circuits) {
    if (num_candidates < 2 || num_labels < 1 || num_inputs < 1)
        throw std::invalid_argument("make_random_cd_instance: bad sizes");
    CircuitInstance inst;
    inst.num_inputs = num_inputs;
    inst.distinct_circuits = distinct_circuits;
    // candidates deduplicated by truth table so every pair is distinguishable
    std::set<std::vector<int>> tables;
    int guard = 0;
    while (static_cast<int>(inst.candidates.size()) < num_candidates) {
        if (++guard > 100000)
            throw std::runtime_error("make_random_cd_instance: cannot find enough distinct circuits");
        std::string text = random_circuit_text(num_inputs, 3, rng);
        Circuit c = Circuit::parse(text, num_inputs);
        if (tables.insert(c.truth_table()).second) inst.candidates.push_back(text);
    }
    for (int l = 0; l < num_labels; ++l) {
        inst.labels.push_back(std::string(1, static_cast<char>('A' + l)));
        while (true) {
            std::size_t pick = rng.next_below(static_cast<std::uint64_t>(num_candidates));
            if (distinct_circuits &&
                std::find(inst.hidden_assignment.begin(), inst.hidden_assignment.end(), pick) !=
                    inst.hidden_assignment.end())
                continue;
            inst.hidden_assignment.push_back(pick);
            break;
        }
    }
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// PreferenceEstimation / MovieRecommendation

std::string pref_answer_name(PrefAnswer a) {
    switch (a) {
        case PrefAnswer::kYes: return "Yes";
        case PrefAnswer::kNo: return "No";
        default: return "Equal";
    }
}

void PreferenceInstance::validate() const {
    if (weights.empty()) throw std::invalid_argument("PreferenceInstance: empty weights");
    for (double w : weights)
        if (w < 0.0 || w > 1.0)
            throw std::invalid_argument("PreferenceInstance: weights must lie in [0,1]");
    if (grid_levels < 2) throw std::invalid_argument("PreferenceInstance: grid_levels < 2");
    auto check_movies = [&](const std::vector<NamedVector>& movies, const char* what) {
        std::set<std::string> names;
        for (const auto& [name, attrs] : movies) {
            if (attrs.size() != weights.size())
                throw std::invalid_argument(std::string("PreferenceInstance: dimension mismatch in ") + what);
            if (!names.insert(name).second)
                throw std::invalid_argument(std::string("PreferenceInstance: duplicate movie name in ") + what);
        }
    };
    check_movies(reference_movies, "reference_movies");
    check_movies(unseen_movies, "unseen_movies");
    if (reference_movies.size() < 2)
        throw std::invalid_argument("PreferenceInstance: need at least two reference movies");
}

double pe_score(const std::vector<double>& weights, const std::vector<double>& attributes) {
    if (weights.size() != attributes.size())
        throw std::invalid_argument("pe_score: dimension mismatch");
    double score = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) score += weights[i] * attributes[i];
    return score;
}

PrefAnswer pe_compare(const std::vector<double>& weights, const std::vector<double>& movie_a,
                      const std::vector<double>& movie_b, double tie_eps) {
    const double sa = pe_score(weights, movie_a);
    const double sb = pe_score(weights, movie_b);
    if (sa > sb + tie_eps) return PrefAnswer::kYes;
    if (sb > sa + tie_eps) return PrefAnswer::kNo;
    return PrefAnswer::kEqual;
}

std::string mr_recommend(const std::vector<double>& weights,
                         const std::vector<NamedVector>& unseen_movies) {
    if (unseen_movies.empty()) throw std::invalid_argument("mr_recommend: empty movie set");
    const NamedVector* best = nullptr;
    double best_score = 0.0;
    for (const auto& movie : unseen_movies) {
        const double score = pe_score(weights, movie.second);
        if (!best || score > best_score || (score == best_score && movie.first < best->first)) {
            best = &movie;
            best_score = score;
        }
    }
    return best->first;
}

StateSpace pe_grid_states(int dimension, int levels, std::size_t cap) {
    if (dimension < 1) throw std::invalid_argument("pe_grid_states: dimension < 1");
    if (levels < 2) throw std::invalid_argument("pe_grid_states: need >= 2 levels");
    double count_check = std::pow(static_cast<double>(levels), dimension);
    if (count_check > static_cast<double>(cap))
        throw std::invalid_argument("pe_grid_states: grid exceeds configured cap");
    const std::size_t count = static_cast<std::size_t>(std::llround(count_check));
    StateSpace space;
    space.states.reserve(count);
    for (StateIndex idx = 0; idx < count; ++idx) {
        const auto v = pe_grid_vector(dimension, levels, idx);
        std::ostringstream os;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << v[i];
        }
        space.states.push_back(os.str());
    }
    space.true_state_index = 0;
    return space;
}

std::vector<double> pe_grid_vector(int dimension, int levels, StateIndex index) {
    std::vector<double> v(static_cast<std::size_t>(dimension));
    const double step = 1.0 / static_cast<double>(levels - 1);
    StateIndex rest = index;
    for (int d = dimension - 1; d >= 0; --d) {
        v[static_cast<std::size_t>(d)] =
            static_cast<double>(rest % static_cast<StateIndex>(levels)) * step;
        rest /= static_cast<StateIndex>(levels);
    }
    return v;
}

double cosine_similarity(const std::vector<double>& v, const std::vector<double>& w) {
    if (v.size() != w.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
    double dot = 0.0, nv = 0.0, nw = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dot += v[i] * w[i];
        nv += v[i] * v[i];
        nw += w[i] * w[i];
    }
    if (nv == 0.0 || nw == 0.0)
        throw std::invalid_argument("cosine_similarity: zero vector");
    return dot / std::sqrt(nv * nw);
}

int binary_similarity(const std::vector<double>& v, const std::vector<double>& v_star,
                      double threshold) {
    return cosine_similarity(v, v_star) > threshold ? 1 : 0;
}

PreferenceInstance make_random_pe_instance(int dimension, int levels, int num_reference,
                                           int num_unseen, RngStream& rng) {
    if (num_reference < 2) throw std::invalid_argument("make_random_pe_instance: need >= 2 movies");
    PreferenceInstance inst;
    inst.grid_levels = levels;
    const double step = 1.0 / static_cast<double>(levels - 1);
    // hidden weights on the grid, not all-zero (the similarity reward needs a direction)
    do {
        inst.weights.assign(static_cast<std::size_t>(dimension), 0.0);
        for (double& w : inst.weights)
            w = static_cast<double>(rng.next_below(static_cast<std::uint64_t>(levels))) * step;
    } while (std::all_of(inst.weights.begin(), inst.weights.end(),
                         [](double w) { return w == 0.0; }));
    auto random_movie = [&](const std::string& name) {
        std::vector<double> attrs(static_cast<std::size_t>(dimension));
        for (double& a : attrs) a = static_cast<double>(rng.next_below(11)) / 10.0;
        return NamedVector{name, attrs};
    };
    for (int i = 0; i < num_reference; ++i)
        inst.reference_movies.push_back(random_movie("Ref_" + std::string(1, static_cast<char>('A' + i % 26)) +
                                                     (i >= 26 ? std::to_string(i / 26) : "")));
    for (int i = 0; i < num_unseen; ++i)
        inst.unseen_movies.push_back(random_movie("Movie_" + std::string(1, static_cast<char>('A' + i % 26)) +
                                                  (i >= 26 ? std::to_string(i / 26) : "")));
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// Task bundles

ObservationModel TaskEnv::observation_model(double eta) const {
    ObservationModel m;
    m.evaluate = evaluate;
    m.alphabet_size = observation_names.size();
    m.eta = eta;
    m.validate();
    return m;
}

TaskEnv make_gn_env(const GuessNumbersInstance& instance) {
    instance.validate();
    TaskEnv env;
    env.task = "gn";
    const auto codes = gn_codes(instance.num_digits, instance.num_symbols);
    env.space = gn_enumerate_states(instance.num_digits, instance.num_symbols);
    const auto truth = std::find(codes.begin(), codes.end(), instance.secret);
    env.space.true_state_index = static_cast<StateIndex>(truth - codes.begin());
    env.space.validate();

    env.action_names = env.space.states;  // guesses range over all codes
    // observation alphabet: all (x, y) with x + y <= a
    std::vector<std::pair<int, int>> obs;
    for (int x = 0; x <= instance.num_digits; ++x)
        for (int y = 0; x + y <= instance.num_digits; ++y) obs.emplace_back(x, y);
    std::vector<std::vector<ObsIndex>> obs_lookup(
        static_cast<std::size_t>(instance.num_digits) + 1);
    for (auto& row : obs_lookup) row.assign(static_cast<std::size_t>(instance.num_digits) + 1, 0);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        env.observation_names.push_back(std::to_string(obs[i].first) + "A" +
                                        std::to_string(obs[i].second) + "B");
        obs_lookup[static_cast<std::size_t>(obs[i].first)][static_cast<std::size_t>(obs[i].second)] = i;
    }
    const std::size_t n = codes.size();
    if (n <= 2048) {
        // feedback table: one entry per (state, action) pair
        auto table = std::make_shared<std::vector<ObsIndex>>(n * n);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t a = 0; a < n; ++a) {
                const GnFeedback fb = gn_feedback(codes[a], codes[s]);
                (*table)[s * n + a] = obs_lookup[static_cast<std::size_t>(fb.exact)]
                                                [static_cast<std::size_t>(fb.misplaced)];
            }
        env.evaluate = [table, n](StateIndex s, ActionIndex a) { return (*table)[s * n + a]; };
    } else {
        auto shared_codes = std::make_shared<std::vector<std::vector<int>>>(codes);
        auto shared_lookup = std::make_shared<std::vector<std::vector<ObsIndex>>>(obs_lookup);
        env.evaluate = [shared_codes, shared_lookup](StateIndex s, ActionIndex a) {
            const GnFeedback fb = gn_feedback((*shared_codes)[a], (*shared_codes)[s]);
            return (*shared_lookup)[static_cast<std::size_t>(fb.exact)]
                                   [static_cast<std::size_t>(fb.misplaced)];
        };
    }
    const StateIndex secret_index = env.space.true_state_index;
    env.winning_action = [secret_index](ActionIndex a) { return a == secret_index; };
    const auto first = std::find(codes.begin(), codes.end(), instance.initial_guess);
    env.initial_action = static_cast<ActionIndex>(first - codes.begin());
    return env;
}

TaskEnv make_cd_env(const CircuitInstance& instance) {
    instance.validate();
    TaskEnv env;
    env.task = "cd";

    auto circuits = std::make_shared<std::vector<Circuit>>();
    for (const auto& text : instance.candidates)
        circuits->push_back(Circuit::parse(text, instance.num_inputs));

    // latent state: tuple of candidate indices, one per label
    const std::size_t c = instance.candidates.size();
    const std::size_t l = instance.labels.size();
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> current(l, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == l) {
            tuples.push_back(current);
            return;
        }
        for (std::size_t i = 0; i < c; ++i) {
            if (instance.distinct_circuits &&
                std::find(current.begin(), current.begin() + static_cast<long>(pos), i) !=
                    current.begin() + static_cast<long>(pos))
                continue;
            current[pos] = i;
            rec(pos + 1);
        }
    };
    rec(0);

    for (const auto& tuple : tuples) {
        std::ostringstream os;
        for (std::size_t i = 0; i < l; ++i) {
            if (i) os << ',';
            os << instance.labels[i] << '=' << tuple[i];
        }
        env.space.states.push_back(os.str());
    }
    const auto truth = std::find(tuples.begin(), tuples.end(), instance.hidden_assignment);
    env.space.true_state_index = static_cast<StateIndex>(truth - tuples.begin());
    env.space.validate();

    // actions: (label, input bit pattern); outputs resolved via truth tables
    const std::size_t patterns = std::size_t{1} << instance.num_inputs;
    std::vector<std::pair<std::size_t, std::size_t>> actions;
    for (std::size_t li = 0; li < l; ++li) {
        for (std::size_t p = 0; p < patterns; ++p) {
            std::ostringstream os;
            os << instance.labels[li] << '(';
            for (int i = 0; i < instance.num_inputs; ++i) {
                if (i) os << ',';
                os << ((p >> i) & 1);
            }
            os << ')';
            env.action_names.push_back(os.str());
            actions.emplace_back(li, p);
        }
    }
    env.observation_names = {"0", "1"};
    auto tables = std::make_shared<std::vector<std::vector<int>>>();
    for (const auto& circuit : *circuits) tables->push_back(circuit.truth_table());
    auto shared_tuples = std::make_shared<std::vector<std::vector<std::size_t>>>(std::move(tuples));
    auto shared_actions =
        std::make_shared<std::vector<std::pair<std::size_t, std::size_t>>>(std::move(actions));
    env.evaluate = [tables, shared_tuples, shared_actions](StateIndex s, ActionIndex a) {
        const auto& [label_idx, pattern] = (*shared_actions)[a];
        return static_cast<ObsIndex>((*tables)[(*shared_tuples)[s][label_idx]][pattern]);
    };
    return env;
}

TaskEnv make_pe_env(const PreferenceInstance& instance) {
    instance.validate();
    TaskEnv env;
    env.task = "pe";
    const int dim = static_cast<int>(instance.weights.size());
    env.space = pe_grid_states(dim, instance.grid_levels);

    // snap the hidden weights onto the grid index
    const double step = 1.0 / static_cast<double>(instance.grid_levels - 1);
    StateIndex truth = 0;
    for (double w : instance.weights) {
        const auto level = static_cast<StateIndex>(std::llround(w / step));
        if (std::abs(w - static_cast<double>(level) * step) > 1e-9)
            throw std::invalid_argument("make_pe_env: hidden weights must lie on the belief grid");
        truth = truth * static_cast<StateIndex>(instance.grid_levels) + level;
    }
    env.space.true_state_index = truth;
    env.space.validate();

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < instance.reference_movies.size(); ++i)
        for (std::size_t j = i + 1; j < instance.reference_movies.size(); ++j) {
            pairs.emplace_back(i, j);
            env.action_names.push_back(instance.reference_movies[i].first + " vs " +
                                       instance.reference_movies[j].first);
        }
    env.observation_names = {"Yes", "No", "Equal"};

    // score every grid point against every reference movie once
    const std::size_t n = env.space.size();
    const std::size_t movies = instance.reference_movies.size();
    auto scores = std::make_shared<std::vector<double>>(n * movies);
    for (StateIndex s = 0; s < n; ++s) {
        const auto w = pe_grid_vector(dim, instance.grid_levels, s);
        for (std::size_t j = 0; j < movies; ++j)
            (*scores)[s * movies + j] = pe_score(w, instance.reference_movies[j].second);
    }
    auto shared_pairs = std::make_shared<std::vector<std::pair<std::size_t, std::size_t>>>(pairs);
    const double tie_eps = instance.tie_eps;
    const int levels = instance.grid_levels;
    env.evaluate = [scores, shared_pairs, movies, tie_eps](StateIndex s, ActionIndex a) {
        const auto [i, j] = (*shared_pairs)[a];
        const double sa = (*scores)[s * movies + i];
        const double sb = (*scores)[s * movies + j];
        if (sa > sb + tie_eps) return ObsIndex{0};  // Yes
        if (sb > sa + tie_eps) return ObsIndex{1};  // No
        return ObsIndex{2};                         // Equal
    };
    env.state_vector = [dim, levels](StateIndex s) { return pe_grid_vector(dim, levels, s); };
    return env;
}

// ---------------------------------------------------------------------------
// JSON round-trips

nlohmann::json gn_to_json(const GuessNumbersInstance& inst) {
    return nlohmann::json{{"task", "gn"},
                          {"num_digits", inst.num_digits},
                          {"num_symbols", inst.num_symbols},
                          {"secret", inst.secret},
                          {"initial_guess", inst.initial_guess},
                          {"initial_feedback", {{"x", inst.initial_feedback.exact},
                                                {"y", inst.initial_feedback.misplaced}}}};
}

GuessNumbersInstance gn_from_json(const nlohmann::json& j) {
    GuessNumbersInstance inst;
    inst.num_digits = j.at("num_digits").get<int>();
    inst.num_symbols = j.at("num_symbols").get<int>();
    inst.secret = j.at("secret").get<std::vector<int>>();
    inst.initial_guess = j.at("initial_guess").get<std::vector<int>>();
    inst.initial_feedback.exact = j.at("initial_feedback").at("x").get<int>();
    inst.initial_feedback.misplaced = j.at("initial_feedback").at("y").get<int>();
    inst.validate();
    return inst;
}

nlohmann::json cd_to_json(const CircuitInstance& inst) {
    nlohmann::json assignment = nlohmann::json::object();
    for (std::size_t i = 0; i < inst.labels.size(); ++i)
        assignment[inst.labels[i]] = inst.hidden_assignment[i];
    return nlohmann::json{{"task", "cd"},
                          {"num_inputs", inst.num_inputs},
                          {"candidates", inst.candidates},
                          {"labels", inst.labels},
                          {"hidden_assignment", assignment},
                          {"distinct_circuits", inst.distinct_circuits}};
}

CircuitInstance cd_from_json(const nlohmann::json& j) {
    CircuitInstance inst;
    inst.num_inputs = j.at("num_inputs").get<int>();
    inst.candidates = j.at("candidates").get<std::vector<std::string>>();
    inst.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& label : inst.labels)
        inst.hidden_assignment.push_back(j.at("hidden_assignment").at(label).get<std::size_t>());
    inst.distinct_circuits = j.value("distinct_circuits", false);
    inst.validate();
    return inst;
}

namespace {

nlohmann::json movies_to_json(const std::vector<NamedVector>& movies) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [name, attrs] : movies) out[name] = attrs;
    return out;
}

std::vector<NamedVector> movies_from_json(const nlohmann::json& j) {
    std::vector<NamedVector> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out.emplace_back(it.key(), it.value().get<std::vector<double>>());
    std::sort(out.begin(), out.end(),
              [](const NamedVector& a, const NamedVector& b) { return a.first < b.first; });
    return out;
}

}  // namespace

nlohmann::json pe_to_json(const PreferenceInstance& inst) {
    return nlohmann::json{{"task", "pe"},
                          {"weights", inst.weights},
                          {"reference_movies", movies_to_json(inst.reference_movies)},
                          {"unseen_movies", movies_to_json(inst.unseen_movies)},
                          {"grid_levels", inst.grid_levels},
                          {"tie_eps", inst.tie_eps}};
}

PreferenceInstance pe_from_json(const nlohmann::json& j) {
    PreferenceInstance inst;
    inst.weights = j.at("weights").get<std::vector<double>>();
    inst.reference_movies = movies_from_json(j.at("reference_movies"));
    inst.unseen_movies = movies_from_json(j.at("unseen_movies"));
    inst.grid_levels = j.value("grid_levels", 6);
    inst.tie_eps = j.value("tie_eps", 1e-9);
    inst.validate();
    return inst;
}

}  // namespace beliefsim
