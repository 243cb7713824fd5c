#include "beliefsim/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "beliefsim/rng.hpp"

namespace beliefsim {

void StateSpace::validate() const {
    if (states.empty()) throw std::invalid_argument("StateSpace: empty");
    if (true_state_index >= states.size())
        throw std::invalid_argument("StateSpace: true_state_index out of range");
    std::unordered_set<std::string> seen;
    for (const auto& s : states)
        if (!seen.insert(s).second)
            throw std::invalid_argument("StateSpace: duplicate identifier " + s);
}

Belief Belief::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Belief::uniform: n == 0");
    return Belief{std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

Belief Belief::point_mass(std::size_t n, StateIndex s) {
    if (s >= n) throw std::invalid_argument("Belief::point_mass: index out of range");
    Belief b{std::vector<double>(n, 0.0)};
    b.probs[s] = 1.0;
    return b;
}

void Belief::validate() const {
    if (probs.empty()) throw std::invalid_argument("Belief: empty");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("Belief: negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("Belief: entries sum to " + std::to_string(sum));
}

void ObservationModel::validate() const {
    if (!evaluate) throw std::invalid_argument("ObservationModel: evaluator not set");
    if (alphabet_size == 0) throw std::invalid_argument("ObservationModel: empty alphabet");
    if (eta < 0.0 || eta * static_cast<double>(alphabet_size) > 1.0 + 1e-12)
        throw std::invalid_argument("ObservationModel: eta must lie in [0, 1/|O|]");
}

double ObservationModel::prob(ObsIndex o, StateIndex s, ActionIndex a) const {
    const double mixed = eta;  // eta'/|O| with eta' = eta*|O|
    const double point = 1.0 - eta * static_cast<double>(alphabet_size);
    return (evaluate(s, a) == o ? point : 0.0) + mixed;
}

Belief bayes_update(const Belief& b, ActionIndex a, ObsIndex o, const ObservationModel& m) {
    const std::size_t n = b.size();
    Belief post{std::vector<double>(n, 0.0)};
    double norm = 0.0;
    for (StateIndex s = 0; s < n; ++s) {
        if (b.probs[s] == 0.0) continue;
        const double w = m.prob(o, s, a) * b.probs[s];
        post.probs[s] = w;
        norm += w;
    }
    if (norm <= 0.0)
        throw std::domain_error("bayes_update: degenerate normalizer p_b(o|a) = 0");
    for (double& p : post.probs) p /= norm;
    return post;
}

double potential(const Belief& b, const StateSpace& space, double psi_max) {
    const double p = b.probs.at(space.true_state_index);
    if (p <= std::exp(-psi_max)) return psi_max;
    return std::max(0.0, -std::log(p));
}

double l1_distance(const Belief& b, const Belief& b2) {
    if (b.size() != b2.size())
        throw std::invalid_argument("l1_distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) d += std::abs(b.probs[i] - b2.probs[i]);
    return d;
}

double informativeness(const Belief& b, ActionIndex a, const StateSpace& space,
                       const ObservationModel& m) {
    // closed form: KL between the truth's observation law and the predictive
    // mixture. One evaluator call per state, then per-observation tallies.
    const double point = 1.0 - m.eta * static_cast<double>(m.alphabet_size);
    std::vector<double> mass(m.alphabet_size, 0.0);
    for (StateIndex s = 0; s < b.size(); ++s)
        if (b.probs[s] > 0.0) mass[m.evaluate(s, a)] += b.probs[s];
    const ObsIndex o_true = m.evaluate(space.true_state_index, a);
    double info = 0.0;
    for (ObsIndex o = 0; o < m.alphabet_size; ++o) {
        const double p_true = (o == o_true ? point : 0.0) + m.eta;
        if (p_true == 0.0) continue;
        const double p_mix = point * mass[o] + m.eta;
        if (p_mix <= 0.0)
            throw std::domain_error("informativeness: observation impossible under belief");
        info += p_true * std::log(p_true / p_mix);
    }
    return std::max(0.0, info);  // KL floor; clears rounding noise near zero
}

double policy_informativeness(const Belief& b, const std::vector<double>& action_probs,
                              const StateSpace& space, const ObservationModel& m) {
    double total = 0.0;
    for (ActionIndex a = 0; a < action_probs.size(); ++a)
        if (action_probs[a] > 0.0) total += action_probs[a] * informativeness(b, a, space, m);
    return total;
}

namespace {

// Shared expectation kernel for agent_progress / update_error. The integrand
// maps (psi_agent_posterior, psi_bayes_posterior) to the summand.
ProgressEstimate expectation_over_outcomes(
    const Belief& b, const PolicyFn& policy, const UpdateFn& updater, const StateSpace& space,
    const ObservationModel& m, const ExpectationLimits& lim,
    const std::function<double(double, double)>& term) {
    const std::vector<double> pi = policy(b);
    const StateIndex truth = space.true_state_index;

    ProgressEstimate est;
    if (pi.size() * m.alphabet_size <= lim.exact_cap) {
        double value = 0.0;
        for (ActionIndex a = 0; a < pi.size(); ++a) {
            if (pi[a] <= 0.0) continue;
            for (ObsIndex o = 0; o < m.alphabet_size; ++o) {
                const double w = pi[a] * m.prob(o, truth, a);
                if (w <= 0.0) continue;
                const double psi_agent = potential(updater(b, a, o), space, lim.psi_max);
                const double psi_bayes = potential(bayes_update(b, a, o, m), space, lim.psi_max);
                value += w * term(psi_agent, psi_bayes);
            }
        }
        est.value = value;
        est.exact = true;
        return est;
    }

    RngStream rng(lim.seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < lim.draws; ++i) {
        double u = rng.next_double();
        ActionIndex a = 0;
        for (; a + 1 < pi.size(); ++a) {
            u -= pi[a];
            if (u <= 0.0) break;
        }
        double v = rng.next_double();
        ObsIndex o = 0;
        for (; o + 1 < m.alphabet_size; ++o) {
            v -= m.prob(o, truth, a);
            if (v <= 0.0) break;
        }
        const double psi_agent = potential(updater(b, a, o), space, lim.psi_max);
        const double psi_bayes = potential(bayes_update(b, a, o, m), space, lim.psi_max);
        const double x = term(psi_agent, psi_bayes);
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(lim.draws);
    est.value = sum / n;
    est.std_error = std::sqrt(std::max(0.0, sum_sq / n - est.value * est.value) / n);
    est.exact = false;
    est.draws = lim.draws;
    return est;
}

}  // namespace

ProgressEstimate agent_progress(const Belief& b, const PolicyFn& policy, const UpdateFn& updater,
                                const StateSpace& space, const ObservationModel& m,
                                const ExpectationLimits& lim) {
    ProgressEstimate est = expectation_over_outcomes(
        b, policy, updater, space, m, lim, [](double psi_agent, double) { return psi_agent; });
    est.value = potential(b, space, lim.psi_max) - est.value;
    return est;
}

ProgressEstimate update_error(const Belief& b, const PolicyFn& policy, const UpdateFn& updater,
                              const StateSpace& space, const ObservationModel& m,
                              const ExpectationLimits& lim) {
    return expectation_over_outcomes(
        b, policy, updater, space, m, lim,
        [](double psi_agent, double psi_bayes) { return psi_agent - psi_bayes; });
}

}  // namespace beliefsim
