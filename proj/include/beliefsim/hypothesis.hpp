#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "beliefsim/belief.hpp"

namespace beliefsim {

// Set of latent states consistent with the interaction history. Members are
// kept sorted; the set never grows across filter steps.
struct HypothesisSet {
    std::vector<StateIndex> members;
    std::uint64_t generation = 0;

    std::size_t size() const { return members.size(); }
    bool contains(StateIndex s) const;
};

HypothesisSet init_full(const StateSpace& space);

// Keeps exactly the members with evaluate(s, a) == o.
HypothesisSet filter_consistent(const HypothesisSet& h, ActionIndex a, ObsIndex o,
                                const std::function<ObsIndex(StateIndex, ActionIndex)>& evaluate);

// Eliminated-hypothesis count |prev| - |next|; throws unless next is a subset.
long long progress(const HypothesisSet& prev, const HypothesisSet& next);

// Uniform distribution over the members, zero elsewhere. Exact-Bayes oracle
// for deterministic feedback (eta = 0).
Belief belief_from_hypotheses(const HypothesisSet& h, const StateSpace& space);

}  // namespace beliefsim
