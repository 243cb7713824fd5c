#include "beliefsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beliefsim {

void PolicySpec::validate() const {
    if (kind == PolicyKind::kInfogainSoftmax && temperature < 0.0)
        throw std::invalid_argument("PolicySpec: temperature must be >= 0");
    if (kind == PolicyKind::kFixedSequence && sequence.empty())
        throw std::invalid_argument("PolicySpec: fixed_sequence needs a non-empty script");
}

std::vector<double> policy_distribution(const PolicySpec& spec, const Belief& b,
                                        std::size_t num_actions, const StateSpace& space,
                                        const ObservationModel& m, std::size_t turn) {
    if (num_actions == 0) throw std::invalid_argument("policy_distribution: no legal actions");
    std::vector<double> pi(num_actions, 0.0);

    switch (spec.kind) {
        case PolicyKind::kFixedSequence: {
            if (spec.sequence.empty())
                throw std::invalid_argument("policy_distribution: empty fixed sequence");
            pi[spec.sequence[turn % spec.sequence.size()] % num_actions] = 1.0;
            return pi;
        }
        case PolicyKind::kUniformConsistent: {
            if (num_actions == b.size()) {
                std::size_t support = 0;
                for (std::size_t s = 0; s < b.size(); ++s)
                    if (b.probs[s] > 0.0) ++support;
                if (support == 0)
                    throw std::invalid_argument("policy_distribution: belief has empty support");
                for (std::size_t s = 0; s < b.size(); ++s)
                    if (b.probs[s] > 0.0) pi[s] = 1.0 / static_cast<double>(support);
            } else {
                std::fill(pi.begin(), pi.end(), 1.0 / static_cast<double>(num_actions));
            }
            return pi;
        }
        case PolicyKind::kInfogainSoftmax: {
            std::vector<double> info(num_actions);
            for (ActionIndex a = 0; a < num_actions; ++a)
                info[a] = informativeness(b, a, space, m);
            if (spec.temperature <= PolicySpec::kTemperatureFloor) {
                // deterministic argmax, ties to the lowest action index
                ActionIndex best = 0;
                for (ActionIndex a = 1; a < num_actions; ++a)
                    if (info[a] > info[best]) best = a;
                pi[best] = 1.0;
                return pi;
            }
            const double max_info = *std::max_element(info.begin(), info.end());
            double norm = 0.0;
            for (ActionIndex a = 0; a < num_actions; ++a) {
                pi[a] = std::exp((info[a] - max_info) / spec.temperature);
                norm += pi[a];
            }
            for (double& p : pi) p /= norm;
            return pi;
        }
    }
    throw std::logic_error("policy_distribution: unknown policy kind");
}

void CorruptionSpec::validate() const {
    if (eps0 < 0.0 || eps_cap > 1.0 || eps0 > eps_cap)
        throw std::invalid_argument("CorruptionSpec: need 0 <= eps0 <= eps_cap <= 1");
    if (slope < 0.0) throw std::invalid_argument("CorruptionSpec: slope must be >= 0");
}

double CorruptionSpec::mix_rate(double psi) const {
    switch (kind) {
        case CorruptionKind::kNone: return 0.0;
        case CorruptionKind::kUniformMix: return eps0;
        case CorruptionKind::kPsiCoupledMix: return std::min(eps_cap, eps0 + slope * psi);
    }
    return 0.0;
}

Belief corrupted_update(const CorruptionSpec& spec, const Belief& b, ActionIndex a, ObsIndex o,
                        const StateSpace& space, const ObservationModel& m, double psi_max) {
    Belief post = bayes_update(b, a, o, m);
    if (spec.kind == CorruptionKind::kNone) return post;
    const double eps = spec.mix_rate(potential(b, space, psi_max));
    if (eps == 0.0) return post;
    const double uniform = 1.0 / static_cast<double>(post.size());
    for (double& p : post.probs) p = (1.0 - eps) * p + eps * uniform;
    return post;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return 0.5 * d;
}

LipschitzEstimate estimate_lipschitz_Lpi(const PolicySpec& spec,
                                         const std::vector<std::pair<Belief, Belief>>& pairs,
                                         std::size_t num_actions, const StateSpace& space,
                                         const ObservationModel& m, std::size_t turn) {
    if (pairs.size() < 100)
        throw std::invalid_argument("estimate_lipschitz_Lpi: need at least 100 belief pairs");
    LipschitzEstimate est;
    for (const auto& [b, b2] : pairs) {
        const double dist = l1_distance(b, b2);
        if (dist == 0.0) continue;  // 0/0 guard: identical pairs carry no information
        const double tv = tv_distance(policy_distribution(spec, b, num_actions, space, m, turn),
                                      policy_distribution(spec, b2, num_actions, space, m, turn));
        ++est.pairs_used;
        if (tv / dist > est.value) {
            est.value = tv / dist;
            est.argmax = {b, b2};
        }
    }
    return est;
}

std::vector<std::pair<Belief, Belief>> sample_belief_pairs(std::size_t count, std::size_t dim,
                                                           RngStream& rng) {
    auto random_belief = [&]() {
        Belief b{std::vector<double>(dim)};
        double sum = 0.0;
        for (double& p : b.probs) {
            p = -std::log(1.0 - rng.next_double());  // Exp(1) draws -> Dirichlet(1,..,1)
            sum += p;
        }
        for (double& p : b.probs) p /= sum;
        return b;
    };
    std::vector<std::pair<Belief, Belief>> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Belief b = random_belief();
        if (i % 2 == 0) {
            pairs.emplace_back(b, random_belief());
        } else {
            // local perturbation probes the small-distance regime
            Belief b2 = b;
            const std::size_t from = rng.next_below(dim);
            std::size_t to = from;
            while (dim > 1 && to == from) to = rng.next_below(dim);
            const double mass = b2.probs[from] * rng.next_double() * 0.5;
            b2.probs[from] -= mass;
            b2.probs[to] += mass;
            pairs.emplace_back(std::move(b), std::move(b2));
        }
    }
    return pairs;
}

}  // namespace beliefsim
