#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "beliefsim/belief.hpp"
#include "beliefsim/rng.hpp"

namespace beliefsim {

enum class PolicyKind { kInfogainSoftmax, kUniformConsistent, kFixedSequence };

struct PolicySpec {
    PolicyKind kind = PolicyKind::kInfogainSoftmax;
    double temperature = 1.0;
    std::uint64_t seed = 0;
    std::vector<ActionIndex> sequence;  // fixed_sequence script, cycled by turn

    // below this temperature the softmax collapses to a deterministic argmax
    static constexpr double kTemperatureFloor = 1e-9;
    void validate() const;
};

// Action distribution at belief b over actions 0..num_actions-1.
//  - infogain_softmax: p(a) proportional to exp(informativeness(b,a)/temperature)
//  - uniform_consistent: uniform over supp(b) when actions mirror states,
//    else uniform over all actions
//  - fixed_sequence: point mass on the scripted action for this turn
std::vector<double> policy_distribution(const PolicySpec& spec, const Belief& b,
                                        std::size_t num_actions, const StateSpace& space,
                                        const ObservationModel& m, std::size_t turn = 0);

enum class CorruptionKind { kNone, kUniformMix, kPsiCoupledMix };

struct CorruptionSpec {
    CorruptionKind kind = CorruptionKind::kNone;
    double eps0 = 0.0;     // base mixing rate
    double slope = 0.0;    // extra mix per nat of psi (psi_coupled_mix)
    double eps_cap = 1.0;  // mixing ceiling

    void validate() const;
    // effective mixing rate at pre-update potential psi
    double mix_rate(double psi) const;
};

// Imperfect belief update B(b,a,o): exact Bayes posterior mixed toward the
// uniform belief at a rate that may grow with the pre-update potential.
Belief corrupted_update(const CorruptionSpec& spec, const Belief& b, ActionIndex a, ObsIndex o,
                        const StateSpace& space, const ObservationModel& m,
                        double psi_max = kDefaultPsiMax);

double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

struct LipschitzEstimate {
    double value = 0.0;
    std::pair<Belief, Belief> argmax;  // the maximizing pair
    std::size_t pairs_used = 0;
};

// Empirical max of TV(pi(.|b), pi(.|b')) / l1(b, b') over sampled pairs;
// plug-in for the policy-sensitivity constant. Identical pairs are skipped.
LipschitzEstimate estimate_lipschitz_Lpi(const PolicySpec& spec,
                                         const std::vector<std::pair<Belief, Belief>>& pairs,
                                         std::size_t num_actions, const StateSpace& space,
                                         const ObservationModel& m, std::size_t turn = 0);

// Random belief pairs (Dirichlet-like draws plus local perturbations).
std::vector<std::pair<Belief, Belief>> sample_belief_pairs(std::size_t count, std::size_t dim,
                                                           RngStream& rng);

}  // namespace beliefsim
