#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "beliefsim/environments.hpp"
#include "beliefsim/rng.hpp"

using namespace beliefsim;

TEST_CASE("gn_feedback counts exact and misplaced digits") {
    CHECK(gn_feedback({1, 2, 3, 4}, {1, 2, 3, 4}) == GnFeedback{4, 0});
    CHECK(gn_feedback({3, 2, 1}, {1, 2, 3}) == GnFeedback{1, 2});
    CHECK(gn_feedback({4, 5}, {1, 2}) == GnFeedback{0, 0});
    CHECK_THROWS_AS(gn_feedback({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("gn_feedback symbol-count sanity on random distinct-symbol pairs") {
    RngStream rng(31);
    const auto codes = gn_codes(3, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto& g = codes[rng.next_below(codes.size())];
        const auto& s = codes[rng.next_below(codes.size())];
        const GnFeedback fb = gn_feedback(g, s);
        CHECK(fb.exact + fb.misplaced <= 3);
        std::set<int> gs(g.begin(), g.end()), ss(s.begin(), s.end());
        std::vector<int> shared;
        std::set_intersection(gs.begin(), gs.end(), ss.begin(), ss.end(),
                              std::back_inserter(shared));
        CHECK(fb.exact + fb.misplaced == static_cast<int>(shared.size()));
    }
}

TEST_CASE("gn state enumeration and instance validation") {
    CHECK(gn_enumerate_states(1, 1).size() == 1);
    CHECK(gn_enumerate_states(3, 5).size() == 60);
    CHECK_THROWS_AS(gn_enumerate_states(4, 3), std::invalid_argument);

    GuessNumbersInstance bad{3, 5, {1, 2, 3}, {1, 2, 3}, {3, 0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // guess equals secret
    GuessNumbersInstance wrong_fb{3, 5, {1, 2, 3}, {3, 2, 1}, {0, 0}};
    CHECK_THROWS_AS(wrong_fb.validate(), std::invalid_argument);
    GuessNumbersInstance ok{3, 5, {1, 2, 3}, {3, 2, 1}, {1, 2}};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("gn presets produce instances with the advertised initial feedback") {
    RngStream rng(17);
    for (const auto& name : gn_preset_names()) {
        const GuessNumbersInstance inst = make_gn_preset(name, rng);
        CHECK_NOTHROW(inst.validate());
        // name encodes (a, b, x0, y0)
        int a, b, x0, y0;
        CHECK(std::sscanf(name.c_str(), "gn-%d-%d-%d-%d", &a, &b, &x0, &y0) == 4);
        CHECK(inst.num_digits == a);
        CHECK(inst.num_symbols == b);
        CHECK(inst.initial_feedback == GnFeedback{x0, y0});
    }
    CHECK_THROWS_AS(make_gn_preset("gn-9-9-0-0", rng), std::invalid_argument);
}

TEST_CASE("cd_observe evaluates the hidden candidate") {
    CircuitInstance inst;
    inst.num_inputs = 2;
    inst.candidates = {"AND(x0,x1)", "XOR(x0,x1)"};
    inst.labels = {"A", "B"};
    inst.hidden_assignment = {0, 1};  // A=AND, B=XOR
    CHECK_NOTHROW(inst.validate());

    CHECK(cd_observe(inst, "A", {1, 1}) == 1);
    CHECK(cd_observe(inst, "A", {1, 0}) == 0);
    CHECK(cd_observe(inst, "B", {1, 1}) == 0);
    CHECK_THROWS_AS(cd_observe(inst, "C", {1, 1}), std::invalid_argument);

    // observation consistency with direct evaluation on every query
    RngStream rng(19);
    const CircuitInstance random_inst = make_random_cd_instance(8, 2, 3, rng);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t label = rng.next_below(random_inst.labels.size());
        std::vector<int> bits(3);
        for (auto& b : bits) b = static_cast<int>(rng.next_below(2));
        const Circuit hidden = Circuit::parse(
            random_inst.candidates[random_inst.hidden_assignment[label]], 3);
        CHECK(cd_observe(random_inst, random_inst.labels[label], bits) == hidden.eval(bits));
    }
}

TEST_CASE("cd instances can forbid repeated hidden circuits") {
    RngStream rng(20);
    const CircuitInstance inst = make_random_cd_instance(6, 3, 2, rng, true);
    std::set<std::size_t> unique(inst.hidden_assignment.begin(), inst.hidden_assignment.end());
    CHECK(unique.size() == 3);
    const TaskEnv env = make_cd_env(inst);
    CHECK(env.space.size() == 6 * 5 * 4);  // ordered distinct tuples
}

TEST_CASE("pe scoring matches the worked example") {
    const std::vector<double> w{0.2, 0.7, 0.5};
    CHECK(pe_score(w, {0.6, 1.0, 0.8}) == doctest::Approx(1.22).epsilon(1e-12));
    CHECK(pe_score(w, {1.2, 0.3, 0.4}) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(pe_score({0, 0, 0}, {0.3, 0.9, 0.1}) == 0.0);
    CHECK_THROWS_AS(pe_score(w, {1.0}), std::invalid_argument);
}

TEST_CASE("pe_compare answers Yes/No/Equal with a tie band") {
    const std::vector<double> w{0.2, 0.7, 0.5};
    const std::vector<double> a{0.6, 1.0, 0.8};  // 1.22
    const std::vector<double> b{1.2, 0.3, 0.4};  // 0.65
    CHECK(pe_compare(w, a, b) == PrefAnswer::kYes);
    CHECK(pe_compare(w, b, a) == PrefAnswer::kNo);
    CHECK(pe_compare(w, a, a) == PrefAnswer::kEqual);
    // score gap below the tie epsilon counts as Equal
    CHECK(pe_compare({1.0}, {0.5}, {0.5 + 1e-12}, 1e-9) == PrefAnswer::kEqual);
}

TEST_CASE("pe_compare antisymmetry on random inputs") {
    RngStream rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> w(3), a(3), b(3);
        for (auto& x : w) x = rng.next_double();
        for (auto& x : a) x = rng.next_double();
        for (auto& x : b) x = rng.next_double();
        const PrefAnswer ab = pe_compare(w, a, b);
        const PrefAnswer ba = pe_compare(w, b, a);
        if (ab == PrefAnswer::kYes) CHECK(ba == PrefAnswer::kNo);
        if (ab == PrefAnswer::kNo) CHECK(ba == PrefAnswer::kYes);
        if (ab == PrefAnswer::kEqual) CHECK(ba == PrefAnswer::kEqual);
        CHECK(pe_compare(w, a, a) == PrefAnswer::kEqual);
    }
}

TEST_CASE("mr_recommend returns the argmax with lexicographic ties") {
    const std::vector<double> w{0.2, 0.7, 0.5};
    const std::vector<NamedVector> movies{{"Movie_A", {0.6, 1.0, 0.8}},
                                          {"Movie_B", {1.2, 0.3, 0.4}},
                                          {"Movie_C", {0.5, 0.8, 0.9}}};
    CHECK(mr_recommend(w, movies) == "Movie_A");
    CHECK(mr_recommend(w, {{"Only", {1, 1, 1}}}) == "Only");
    CHECK(mr_recommend(w, {{"B", {1, 1, 1}}, {"A", {1, 1, 1}}}) == "A");
    CHECK_THROWS_AS(mr_recommend(w, {}), std::invalid_argument);

    // argmax property against a full scan
    RngStream rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<NamedVector> pool;
        for (int i = 0; i < 6; ++i) {
            std::vector<double> attrs(3);
            for (auto& x : attrs) x = rng.next_double();
            pool.push_back({"M" + std::to_string(i), attrs});
        }
        std::vector<double> weights(3);
        for (auto& x : weights) x = rng.next_double();
        const std::string best = mr_recommend(weights, pool);
        double best_score = -1.0;
        for (const auto& m : pool) best_score = std::max(best_score, pe_score(weights, m.second));
        double got = 0.0;
        for (const auto& m : pool)
            if (m.first == best) got = pe_score(weights, m.second);
        CHECK(got == doctest::Approx(best_score));
    }
}

TEST_CASE("pe grid enumeration") {
    CHECK(pe_grid_states(2, 3).size() == 9);
    CHECK(pe_grid_states(3, 2).size() == 8);
    CHECK(pe_grid_states(1, 11).size() == 11);
    CHECK_THROWS_AS(pe_grid_states(8, 20), std::invalid_argument);  // exceeds the cap
    CHECK_THROWS_AS(pe_grid_states(2, 1), std::invalid_argument);

    // decode covers the corners
    const auto lo = pe_grid_vector(2, 3, 0);
    CHECK(lo == std::vector<double>{0.0, 0.0});
    const auto hi = pe_grid_vector(2, 3, 8);
    CHECK(hi == std::vector<double>{1.0, 1.0});
}

TEST_CASE("binary similarity thresholds the cosine score") {
    CHECK(binary_similarity({0.3, 0.4}, {0.3, 0.4}) == 1);
    CHECK(binary_similarity({1, 0}, {0, 1}) == 0);
    CHECK(binary_similarity({1, 1}, {1, 0}) == 0);  // cosine ~ 0.707 < 0.88
    CHECK(binary_similarity({1, 1}, {1, 0.8}, 0.5) == 1);
    CHECK_THROWS_AS(binary_similarity({0, 0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("instance json round-trips are byte-stable") {
    RngStream rng(43);
    const GuessNumbersInstance gn = make_random_gn_instance(3, 5, rng);
    const std::string gn_text = gn_to_json(gn).dump(2);
    CHECK(gn_to_json(gn_from_json(nlohmann::json::parse(gn_text))).dump(2) == gn_text);

    const CircuitInstance cd = make_random_cd_instance(6, 2, 2, rng);
    const std::string cd_text = cd_to_json(cd).dump(2);
    CHECK(cd_to_json(cd_from_json(nlohmann::json::parse(cd_text))).dump(2) == cd_text);

    const PreferenceInstance pe = make_random_pe_instance(3, 6, 5, 3, rng);
    const std::string pe_text = pe_to_json(pe).dump(2);
    CHECK(pe_to_json(pe_from_json(nlohmann::json::parse(pe_text))).dump(2) == pe_text);
}

TEST_CASE("task envs expose consistent evaluators") {
    RngStream rng(47);

    const GuessNumbersInstance gn = make_random_gn_instance(3, 4, rng);
    const TaskEnv gn_env = make_gn_env(gn);
    CHECK(gn_env.space.size() == 24);
    CHECK(gn_env.num_actions() == 24);
    CHECK(gn_env.space.states[gn_env.space.true_state_index] == gn_code_name(gn.secret));
    REQUIRE(gn_env.initial_action.has_value());
    CHECK(gn_env.action_names[*gn_env.initial_action] == gn_code_name(gn.initial_guess));
    // the evaluator reproduces gn_feedback against the secret
    const auto codes = gn_codes(3, 4);
    for (std::size_t a = 0; a < codes.size(); ++a) {
        const GnFeedback fb = gn_feedback(codes[a], gn.secret);
        const std::string expect = std::to_string(fb.exact) + "A" +
                                   std::to_string(fb.misplaced) + "B";
        CHECK(gn_env.observation_names[gn_env.evaluate(gn_env.space.true_state_index, a)] ==
              expect);
    }

    const PreferenceInstance pe = make_random_pe_instance(2, 3, 4, 2, rng);
    const TaskEnv pe_env = make_pe_env(pe);
    CHECK(pe_env.space.size() == 9);
    CHECK(pe_env.num_actions() == 6);  // 4 choose 2 reference pairs
    const auto truth_vec = pe_env.state_vector(pe_env.space.true_state_index);
    CHECK(truth_vec == pe.weights);
    // evaluator matches pe_compare on the hidden weights
    for (ActionIndex a = 0; a < pe_env.num_actions(); ++a) {
        const ObsIndex o = pe_env.evaluate(pe_env.space.true_state_index, a);
        CHECK(o <= 2);
    }
}

TEST_CASE("eta smoothing keeps observation rows normalized") {
    RngStream rng(53);
    const TaskEnv env = make_gn_env(make_random_gn_instance(3, 4, rng));
    const ObservationModel m = env.observation_model(0.02);
    for (int trial = 0; trial < 50; ++trial) {
        const StateIndex s = rng.next_below(env.space.size());
        const ActionIndex a = rng.next_below(env.num_actions());
        double row = 0.0;
        double floor = 1.0;
        for (ObsIndex o = 0; o < m.alphabet_size; ++o) {
            const double p = m.prob(o, s, a);
            row += p;
            floor = std::min(floor, p);
        }
        CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(floor == doctest::Approx(0.02).epsilon(1e-12));
    }
    CHECK_THROWS_AS(env.observation_model(0.2), std::invalid_argument);  // 0.2 * 10 > 1
}
