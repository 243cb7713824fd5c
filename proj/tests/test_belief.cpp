#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "beliefsim/belief.hpp"
#include "beliefsim/hypothesis.hpp"
#include "beliefsim/rng.hpp"

using namespace beliefsim;

namespace {

// tiny deterministic evaluator environments for the core operations
ObservationModel partition_model(std::vector<ObsIndex> outcome_by_state, std::size_t alphabet,
                                 double eta) {
    ObservationModel m;
    m.evaluate = [table = std::move(outcome_by_state)](StateIndex s, ActionIndex) {
        return table[s];
    };
    m.alphabet_size = alphabet;
    m.eta = eta;
    return m;
}

StateSpace make_space(std::size_t n, StateIndex truth) {
    StateSpace space;
    for (std::size_t i = 0; i < n; ++i) space.states.push_back("s" + std::to_string(i));
    space.true_state_index = truth;
    return space;
}

// independent slow route for informativeness:
// psi(b) - E_o psi(B*(b,a,o)), expectation enumerated over the alphabet
double informativeness_by_definition(const Belief& b, ActionIndex a, const StateSpace& space,
                                     const ObservationModel& m) {
    double expectation = 0.0;
    for (ObsIndex o = 0; o < m.alphabet_size; ++o) {
        const double w = m.prob(o, space.true_state_index, a);
        if (w == 0.0) continue;
        expectation += w * (-std::log(bayes_update(b, a, o, m).probs[space.true_state_index]));
    }
    return -std::log(b.probs[space.true_state_index]) - expectation;
}

}  // namespace

TEST_CASE("bayes_update matches hand-enumerated posteriors") {
    // o consistent with states {0,1} only, uniform prior, eta = 0
    auto m = partition_model({0, 0, 1}, 2, 0.0);
    const Belief post = bayes_update(Belief::uniform(3), 0, 0, m);
    CHECK(post.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(post.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(post.probs[2] == doctest::Approx(0.0));

    // likelihood constant across states leaves the belief unchanged
    auto flat = partition_model({0, 0, 0, 0}, 2, 0.2);
    Belief b{std::vector<double>{0.1, 0.2, 0.3, 0.4}};
    const Belief same = bayes_update(b, 0, 0, flat);
    for (std::size_t s = 0; s < 4; ++s)
        CHECK(same.probs[s] == doctest::Approx(b.probs[s]).epsilon(1e-12));

    // observation consistent with exactly state 2
    auto single = partition_model({0, 0, 1, 0}, 2, 0.0);
    const Belief pinned = bayes_update(Belief::uniform(4), 0, 1, single);
    CHECK(pinned.probs[2] == doctest::Approx(1.0));
    CHECK(pinned.probs[0] == 0.0);
    CHECK(pinned.probs[3] == 0.0);
}

TEST_CASE("bayes_update rejects a degenerate normalizer") {
    auto m = partition_model({0, 0}, 2, 0.0);
    Belief b{std::vector<double>{1.0, 0.0}};
    CHECK_THROWS_AS(bayes_update(b, 0, 1, m), std::domain_error);
}

TEST_CASE("bayes_update outputs valid beliefs for random inputs") {
    RngStream rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.next_below(8);
        const std::size_t alphabet = 2 + rng.next_below(3);
        std::vector<ObsIndex> table(n);
        for (auto& o : table) o = rng.next_below(alphabet);
        const double eta =
            rng.next_below(2) == 0 ? 0.0 : rng.next_double() / static_cast<double>(alphabet);
        auto m = partition_model(table, alphabet, eta);

        Belief b{std::vector<double>(n)};
        double sum = 0.0;
        for (auto& p : b.probs) {
            p = rng.next_double() + 1e-3;
            sum += p;
        }
        for (auto& p : b.probs) p /= sum;

        const ObsIndex o = table[rng.next_below(n)];  // a reachable observation
        const Belief post = bayes_update(b, 0, o, m);
        double post_sum = 0.0;
        for (double p : post.probs) {
            CHECK(p >= 0.0);
            post_sum += p;
        }
        CHECK(std::abs(post_sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("potential anchors at the true state") {
    const StateSpace space = make_space(2, 0);
    CHECK(potential(Belief::point_mass(2, 0), space) == 0.0);
    Belief half{std::vector<double>{0.5, 0.5}};
    CHECK(potential(half, space) == doctest::Approx(0.6931471805599453).epsilon(1e-12));
    CHECK(potential(Belief::point_mass(2, 1), space) == kDefaultPsiMax);
    CHECK(potential(Belief::point_mass(2, 1), space, 7.0) == 7.0);
}

TEST_CASE("l1_distance basics") {
    Belief a{std::vector<double>{1.0, 0.0}};
    Belief b{std::vector<double>{0.0, 1.0}};
    CHECK(l1_distance(a, a) == 0.0);
    CHECK(l1_distance(a, b) == 2.0);
    Belief c{std::vector<double>{0.5, 0.5}};
    Belief d{std::vector<double>{0.75, 0.25}};
    CHECK(l1_distance(c, d) == doctest::Approx(0.5).epsilon(1e-12));
    Belief e{std::vector<double>{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(l1_distance(a, e), std::invalid_argument);
}

TEST_CASE("informativeness closed form agrees with the definition route") {
    // partition {1,3} with the truth alone in its class: ln 4 expected
    const StateSpace space = make_space(4, 0);
    auto m = partition_model({0, 1, 1, 1}, 2, 0.0);
    const double info = informativeness(Belief::uniform(4), 0, space, m);
    CHECK(info == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    // point mass cannot concentrate further
    CHECK(informativeness(Belief::point_mass(4, 0), 0, space, m) == doctest::Approx(0.0));

    // state-independent observations are uninformative
    auto flat = partition_model({0, 0, 0, 0}, 3, 0.1);
    CHECK(informativeness(Belief::uniform(4), 0, space, flat) ==
          doctest::Approx(0.0).epsilon(1e-15));

    // closed form vs direct-definition enumeration on smoothed models
    RngStream rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.next_below(6);
        const std::size_t alphabet = 2 + rng.next_below(3);
        std::vector<ObsIndex> table(n);
        for (auto& o : table) o = rng.next_below(alphabet);
        const double eta = (0.05 + 0.9 * rng.next_double()) / static_cast<double>(alphabet);
        auto model = partition_model(table, alphabet, eta);
        const StateSpace sp = make_space(n, rng.next_below(n));

        Belief b{std::vector<double>(n)};
        double sum = 0.0;
        for (auto& p : b.probs) {
            p = rng.next_double() + 1e-3;
            sum += p;
        }
        for (auto& p : b.probs) p /= sum;

        const double closed = informativeness(b, 0, sp, model);
        const double direct = informativeness_by_definition(b, 0, sp, model);
        CHECK(closed == doctest::Approx(direct).epsilon(1e-10));
        CHECK(closed >= -1e-12);
        CHECK(closed <= -std::log(eta) + 1e-12);
    }
}

TEST_CASE("informativeness is belief-Lipschitz with constant 1/eta") {
    RngStream rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng.next_below(5);
        const std::size_t alphabet = 2 + rng.next_below(2);
        std::vector<ObsIndex> table(n);
        for (auto& o : table) o = rng.next_below(alphabet);
        const double eta = (0.1 + 0.8 * rng.next_double()) / static_cast<double>(alphabet);
        auto model = partition_model(table, alphabet, eta);
        const StateSpace sp = make_space(n, 0);

        auto random_belief = [&]() {
            Belief b{std::vector<double>(n)};
            double sum = 0.0;
            for (auto& p : b.probs) {
                p = rng.next_double() + 1e-4;
                sum += p;
            }
            for (auto& p : b.probs) p /= sum;
            return b;
        };
        const Belief b1 = random_belief();
        const Belief b2 = random_belief();
        const double gap =
            std::abs(informativeness(b1, 0, sp, model) - informativeness(b2, 0, sp, model));
        CHECK(gap <= l1_distance(b1, b2) / eta + 1e-12);
    }
}

TEST_CASE("agent progress and update error decompose exactly") {
    // 6-state space, two actions with different partitions, smoothed model
    const StateSpace space = make_space(6, 2);
    std::vector<std::vector<ObsIndex>> tables{{0, 0, 1, 1, 2, 2}, {0, 1, 0, 1, 0, 1}};
    ObservationModel m;
    m.evaluate = [tables](StateIndex s, ActionIndex a) { return tables[a][s]; };
    m.alphabet_size = 3;
    m.eta = 0.05;

    PolicyFn policy = [](const Belief&) { return std::vector<double>{0.3, 0.7}; };
    UpdateFn bayes = [&m](const Belief& b, ActionIndex a, ObsIndex o) {
        return bayes_update(b, a, o, m);
    };
    UpdateFn to_uniform = [](const Belief& b, ActionIndex, ObsIndex) {
        return Belief::uniform(b.size());
    };

    Belief b{std::vector<double>{0.4, 0.1, 0.3, 0.1, 0.05, 0.05}};

    SUBCASE("exact Bayes: zero update error, progress equals averaged informativeness") {
        const ProgressEstimate err = update_error(b, policy, bayes, space, m);
        CHECK(err.exact);
        CHECK(err.value == doctest::Approx(0.0).epsilon(1e-12));
        const ProgressEstimate prog = agent_progress(b, policy, bayes, space, m);
        const double avg_info = policy_informativeness(b, policy(b), space, m);
        CHECK(prog.value == doctest::Approx(avg_info).epsilon(1e-10));
    }

    SUBCASE("always-uniform updater yields negative progress below log|S|") {
        CHECK(potential(b, space) < std::log(6.0));
        const ProgressEstimate prog = agent_progress(b, policy, to_uniform, space, m);
        CHECK(prog.value < 0.0);
    }

    SUBCASE("point mass with exact Bayes makes no progress") {
        const ProgressEstimate prog =
            agent_progress(Belief::point_mass(6, 2), policy, bayes, space, m);
        CHECK(prog.value == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("decomposition holds to 1e-9 for a corrupted updater") {
        UpdateFn mixed = [&m](const Belief& bb, ActionIndex a, ObsIndex o) {
            Belief post = bayes_update(bb, a, o, m);
            for (auto& p : post.probs) p = 0.4 * p + 0.6 / static_cast<double>(post.size());
            return post;
        };
        const double prog = agent_progress(b, policy, mixed, space, m).value;
        const double info = policy_informativeness(b, policy(b), space, m);
        const double err = update_error(b, policy, mixed, space, m).value;
        CHECK(prog == doctest::Approx(info - err).epsilon(1e-9));
    }

    SUBCASE("Monte-Carlo estimate agrees with enumeration") {
        ExpectationLimits lim;
        lim.exact_cap = 0;  // force sampling
        lim.draws = 40000;
        lim.seed = 7;
        const ProgressEstimate exact = update_error(b, policy, to_uniform, space, m);
        const ProgressEstimate sampled = update_error(b, policy, to_uniform, space, m, lim);
        CHECK(!sampled.exact);
        CHECK(sampled.draws == 40000);
        CHECK(std::abs(sampled.value - exact.value) <= 5.0 * sampled.std_error + 1e-9);
    }
}

TEST_CASE("belief and state-space validation") {
    StateSpace dup;
    dup.states = {"a", "a"};
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
    StateSpace out;
    out.states = {"a"};
    out.true_state_index = 3;
    CHECK_THROWS_AS(out.validate(), std::invalid_argument);

    Belief negative{std::vector<double>{1.5, -0.5}};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
    Belief ok = Belief::uniform(3);
    CHECK_NOTHROW(ok.validate());

    ObservationModel m;
    m.alphabet_size = 4;
    m.eta = 0.3;  // 0.3 * 4 > 1
    m.evaluate = [](StateIndex, ActionIndex) { return ObsIndex{0}; };
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
