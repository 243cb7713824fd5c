#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "beliefsim/rng.hpp"
#include "beliefsim/truncation.hpp"

using namespace beliefsim;

namespace {

std::vector<TurnSignal> progress_signals(const std::vector<double>& values) {
    std::vector<TurnSignal> signals;
    for (double v : values) {
        TurnSignal s;
        s.progress = v;
        signals.push_back(s);
    }
    return signals;
}

}  // namespace

TEST_CASE("t3_check fires only when the whole window stalls") {
    const auto signals = progress_signals({5, 0, 0, 0});
    CHECK(t3_check(signals, 3, 1.0, 4));        // window (0,0,0)
    CHECK(!t3_check(signals, 3, 1.0, 3));       // window (5,0,0) has progress
    CHECK(!t3_check(signals, 3, 1.0, 2));       // window not yet full
    CHECK(!t3_check(progress_signals({0, 0, 5}), 3, 1.0, 3));
    CHECK_THROWS_AS(t3_check(signals, 3, 1.0, 9), std::invalid_argument);
    std::vector<TurnSignal> missing(4);
    CHECK_THROWS_AS(t3_check(missing, 3, 1.0, 4), std::invalid_argument);
}

TEST_CASE("gn_consistency_rule is the inconsistency indicator") {
    CHECK(!gn_consistency_rule(true));
    CHECK(gn_consistency_rule(false));
}

TEST_CASE("cd_stall_rule needs k consecutive non-decreases") {
    CHECK(cd_stall_rule({100, 40, 40, 40, 40}, 3));
    CHECK(!cd_stall_rule({100, 80, 60, 40, 20}, 3));
    CHECK(!cd_stall_rule({10, 10, 5, 5, 5}, 3));        // the drop interrupts the stall
    CHECK(cd_stall_rule({10, 10, 5, 5, 5, 5}, 3));      // three stalls after the drop
    CHECK(!cd_stall_rule({40, 40, 40}, 3));             // only two transitions so far
}

TEST_CASE("streak_unknown_rule counts trailing uninformative labels") {
    const std::string u = "Unknown";
    CHECK(streak_unknown_rule({u, u, u, u, u}, 5));
    CHECK(!streak_unknown_rule({u, u, u, u, "Yes"}, 5));
    CHECK(streak_unknown_rule({"Yes", u, u, u, u, u}, 5));
    CHECK(!streak_unknown_rule({u, u, u}, 5));  // window not full
}

TEST_CASE("pe_sim_drop_rule reads strict decreases only") {
    CHECK(pe_sim_drop_rule({-0.1, -0.05}, 2));
    CHECK(!pe_sim_drop_rule({-0.1, 0.0}, 2));  // zero gain is not a decrease
    CHECK(pe_sim_drop_rule({0.2, -0.1, -0.1}, 2));
    CHECK(!pe_sim_drop_rule({-0.3}, 2));
}

TEST_CASE("similarity_alpha_rule flags near-duplicate queries") {
    const std::vector<double> e1{1.0, 0.0};
    const std::vector<double> e2{0.0, 1.0};
    const std::vector<double> diag{1.0, 1.0};
    CHECK(similarity_alpha_rule({e1, e2, e1}, 0.9));   // exact repeat
    CHECK(!similarity_alpha_rule({e1, e2}, 0.9));      // orthogonal
    CHECK(!similarity_alpha_rule({e1, diag}, 0.9));    // cosine ~ 0.707
    CHECK(similarity_alpha_rule({e1, diag}, 0.5));
    CHECK(!similarity_alpha_rule({e1}, 0.9));          // nothing earlier to compare
    CHECK_THROWS_AS(similarity_alpha_rule({e1, {0.0, 0.0}}, 0.9), std::invalid_argument);
}

TEST_CASE("random_beta_rule is a seeded replayable coin") {
    for (std::size_t t = 1; t <= 50; ++t) {
        CHECK(!random_beta_rule(0.0, 9, t));
        CHECK(random_beta_rule(1.0, 9, t));
        CHECK(random_beta_rule(0.5, 9, t) == random_beta_rule(0.5, 9, t));
    }
    std::size_t fired = 0;
    const std::size_t n = 10000;
    for (std::size_t t = 1; t <= n; ++t)
        if (random_beta_rule(0.5, 123, t)) ++fired;
    const double freq = static_cast<double>(fired) / static_cast<double>(n);
    CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +- 0.02
    CHECK_THROWS_AS(random_beta_rule(1.5, 0, 1), std::invalid_argument);
}

TEST_CASE("streak-style rules are monotone in the window size") {
    RngStream rng(89);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = 1 + rng.next_below(12);
        std::vector<double> gains;
        std::vector<std::string> labels;
        std::vector<std::size_t> sizes{50};
        for (std::size_t i = 0; i < len; ++i) {
            gains.push_back(rng.next_double() - 0.5);
            labels.push_back(rng.next_below(3) == 0 ? "Unknown" : "Yes");
            sizes.push_back(sizes.back() - rng.next_below(2));
        }
        for (std::size_t k = 2; k <= 5; ++k) {
            if (pe_sim_drop_rule(gains, k))
                for (std::size_t smaller = 1; smaller < k; ++smaller)
                    CHECK(pe_sim_drop_rule(gains, smaller));
            if (streak_unknown_rule(labels, k))
                for (std::size_t smaller = 1; smaller < k; ++smaller)
                    CHECK(streak_unknown_rule(labels, smaller));
            if (cd_stall_rule(sizes, k))
                for (std::size_t smaller = 1; smaller < k; ++smaller)
                    CHECK(cd_stall_rule(sizes, smaller));
        }
    }
}

TEST_CASE("deterministic rules replay identically on the same history") {
    RngStream rng(97);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 3 + rng.next_below(8);
        auto signals = progress_signals({});
        std::vector<std::size_t> sizes{30};
        for (std::size_t i = 0; i < len; ++i) {
            TurnSignal s;
            s.progress = static_cast<double>(rng.next_below(3));
            s.action_consistent = rng.next_below(2) == 0;
            signals.push_back(s);
            sizes.push_back(sizes.back() - rng.next_below(2));
        }
        TruncationRule rule;
        rule.kind = trial % 2 == 0 ? RuleKind::kT3Window : RuleKind::kCdStall;
        rule.k = 2;
        rule.delta_min = 1.0;
        CHECK(evaluate_rule(rule, signals, sizes, len) ==
              evaluate_rule(rule, signals, sizes, len));
    }
}

TEST_CASE("evaluate_rule dispatches similarity and label signals") {
    TruncationRule sim_rule;
    sim_rule.kind = RuleKind::kPeSimDrop;
    sim_rule.k = 2;
    std::vector<TurnSignal> signals;
    std::vector<std::size_t> sizes{10};
    auto push_gain = [&](double gain) {
        TurnSignal s;
        s.similarity_gain = gain;
        signals.push_back(s);
        sizes.push_back(sizes.back());
    };
    push_gain(0.2);
    CHECK(!evaluate_rule(sim_rule, signals, sizes, 1));
    push_gain(-0.1);
    CHECK(!evaluate_rule(sim_rule, signals, sizes, 2));
    push_gain(-0.05);
    CHECK(evaluate_rule(sim_rule, signals, sizes, 3));

    TruncationRule streak;
    streak.kind = RuleKind::kStreakUnknown;
    streak.k = 2;
    std::vector<TurnSignal> labels;
    for (const char* l : {"Yes", "Unknown", "Unknown"}) {
        TurnSignal s;
        s.feedback_label = l;
        labels.push_back(s);
    }
    CHECK(evaluate_rule(streak, labels, {3, 3, 3, 3}, 3));

    TruncationRule alpha;
    alpha.kind = RuleKind::kSimilarityAlpha;
    alpha.alpha = 0.9;
    std::vector<TurnSignal> queries;
    for (int a : {0, 1, 0}) {
        TurnSignal s;
        std::vector<double> onehot(3, 0.0);
        onehot[static_cast<std::size_t>(a)] = 1.0;
        s.query_vector = onehot;
        queries.push_back(s);
    }
    CHECK(evaluate_rule(alpha, queries, {4, 4, 4, 4}, 3));
    queries.pop_back();
    CHECK(!evaluate_rule(alpha, queries, {4, 4, 4}, 2));
}

TEST_CASE("rule validation rejects out-of-range parameters") {
    TruncationRule rule;
    rule.kind = RuleKind::kT3Window;
    rule.delta_min = 0.0;
    CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
    rule.delta_min = 1.0;
    rule.k = 0;
    CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
    TruncationRule alpha;
    alpha.kind = RuleKind::kSimilarityAlpha;
    alpha.alpha = 1.0;
    CHECK_THROWS_AS(alpha.validate(), std::invalid_argument);
    TruncationRule beta;
    beta.beta = 2.0;
    CHECK_THROWS_AS(beta.validate(), std::invalid_argument);
    CHECK_THROWS_AS(rule_kind_from_name("bogus"), std::invalid_argument);
}
