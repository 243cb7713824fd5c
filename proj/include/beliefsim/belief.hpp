#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace beliefsim {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;
using ObsIndex = std::size_t;

// Saturation value for -log b(s*) when b(s*) underflows to 0. Threshold
// comparisons treat psi >= psi_max as trapped.
inline constexpr double kDefaultPsiMax = 50.0;
inline constexpr double kBeliefSumTol = 1e-12;

// Enumerated latent state space with a designated ground-truth state.
struct StateSpace {
    std::vector<std::string> states;
    StateIndex true_state_index = 0;

    std::size_t size() const { return states.size(); }
    void validate() const;  // non-empty, unique identifiers, index in range
};

// Probability vector aligned with a StateSpace.
struct Belief {
    std::vector<double> probs;

    static Belief uniform(std::size_t n);
    static Belief point_mass(std::size_t n, StateIndex s);

    std::size_t size() const { return probs.size(); }
    double at(StateIndex s) const { return probs[s]; }
    void validate() const;  // entries >= 0, sum within 1e-12 of 1
};

// Deterministic evaluator f(s,a) smoothed into
//   O(o|s,a) = (1 - eta') 1[o = f(s,a)] + eta'/|O|,  eta' = eta * |O|,
// so every row sums to 1 and has floor exactly eta. eta = 0 recovers the
// deterministic environment.
struct ObservationModel {
    std::function<ObsIndex(StateIndex, ActionIndex)> evaluate;
    std::size_t alphabet_size = 0;
    double eta = 0.0;

    void validate() const;  // evaluate set, alphabet non-empty, eta*|O| <= 1
    double prob(ObsIndex o, StateIndex s, ActionIndex a) const;
};

// Exact Bayes posterior (throws on a zero normalizer, only possible at eta=0).
Belief bayes_update(const Belief& b, ActionIndex a, ObsIndex o, const ObservationModel& m);

// Truth-anchored potential -log b(s*), saturated at psi_max.
double potential(const Belief& b, const StateSpace& space, double psi_max = kDefaultPsiMax);

// l1 distance between beliefs, in [0, 2].
double l1_distance(const Belief& b, const Belief& b2);

// One-step informativeness of action a at belief b under the exact Bayesian
// update: KL(O(.|s*,a) || p_b(.|a)). Non-negative, bounded by -log eta.
double informativeness(const Belief& b, ActionIndex a, const StateSpace& space,
                       const ObservationModel& m);

// Distribution over the full action set, given the current belief.
using PolicyFn = std::function<std::vector<double>(const Belief&)>;
// Belief updater B(b, a, o); exact Bayes or a corrupted variant.
using UpdateFn = std::function<Belief(const Belief&, ActionIndex, ObsIndex)>;

struct ExpectationLimits {
    std::size_t exact_cap = 1000000;  // enumerate while |A|*|O| <= cap
    std::size_t draws = 20000;        // Monte-Carlo draws otherwise
    std::uint64_t seed = 0;
    double psi_max = kDefaultPsiMax;
};

struct ProgressEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 when exact
    bool exact = true;
    std::size_t draws = 0;
};

// Informativeness averaged over the action distribution.
double policy_informativeness(const Belief& b, const std::vector<double>& action_probs,
                              const StateSpace& space, const ObservationModel& m);

// Expected one-step potential progress of the agent,
//   P(b) = psi(b) - E_{a~pi} E_{o~O(.|s*,a)} psi(B(b,a,o)).
ProgressEstimate agent_progress(const Belief& b, const PolicyFn& policy, const UpdateFn& updater,
                                const StateSpace& space, const ObservationModel& m,
                                const ExpectationLimits& lim = {});

// Conditional update error c(b) = E[psi(B(b,a,o)) - psi(B*(b,a,o))].
// Satisfies agent_progress = policy_informativeness - update_error on
// enumerable instances.
ProgressEstimate update_error(const Belief& b, const PolicyFn& policy, const UpdateFn& updater,
                              const StateSpace& space, const ObservationModel& m,
                              const ExpectationLimits& lim = {});

}  // namespace beliefsim
