#include "beliefsim/hypothesis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace beliefsim {

bool HypothesisSet::contains(StateIndex s) const {
    return std::binary_search(members.begin(), members.end(), s);
}

HypothesisSet init_full(const StateSpace& space) {
    HypothesisSet h;
    h.members.resize(space.size());
    std::iota(h.members.begin(), h.members.end(), StateIndex{0});
    return h;
}

HypothesisSet filter_consistent(const HypothesisSet& h, ActionIndex a, ObsIndex o,
                                const std::function<ObsIndex(StateIndex, ActionIndex)>& evaluate) {
    HypothesisSet out;
    out.generation = h.generation + 1;
    out.members.reserve(h.members.size());
    for (StateIndex s : h.members)
        if (evaluate(s, a) == o) out.members.push_back(s);
    return out;
}

long long progress(const HypothesisSet& prev, const HypothesisSet& next) {
    if (!std::includes(prev.members.begin(), prev.members.end(), next.members.begin(),
                       next.members.end()))
        throw std::invalid_argument("progress: next is not a subset of prev");
    return static_cast<long long>(prev.size()) - static_cast<long long>(next.size());
}

Belief belief_from_hypotheses(const HypothesisSet& h, const StateSpace& space) {
    if (h.members.empty())
        throw std::invalid_argument("belief_from_hypotheses: empty hypothesis set");
    Belief b{std::vector<double>(space.size(), 0.0)};
    const double mass = 1.0 / static_cast<double>(h.members.size());
    for (StateIndex s : h.members) b.probs.at(s) = mass;
    return b;
}

}  // namespace beliefsim
