#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beliefsim/belief.hpp"

namespace beliefsim {

enum class RuleKind {
    kNone,
    kT3Window,         // generic: progress < delta_min across a k-window
    kGnConsistency,    // guess left the consistent set (k = 1 specialization)
    kCdStall,          // hypothesis count failed to shrink k times in a row
    kStreakUnknown,    // k consecutive uninformative feedback labels
    kPeSimDrop,        // similarity gain negative k times in a row
    kSimilarityAlpha,  // current query too close to any previous one
    kRandomBeta,       // coin flip per step
};

std::string rule_kind_name(RuleKind kind);
RuleKind rule_kind_from_name(const std::string& name);

struct TruncationRule {
    RuleKind kind = RuleKind::kNone;
    std::size_t k = 3;
    double delta_min = 1.0;
    double alpha = 0.9;
    double beta = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Raw per-turn inputs the rules consume; at least one field set per turn.
struct TurnSignal {
    std::optional<double> progress;               // eliminated-hypothesis count
    std::optional<std::string> feedback_label;    // e.g. Yes/No/Unknown
    std::optional<double> similarity_gain;        // sim(v_{t+1},v*) - sim(v_t,v*)
    std::optional<std::vector<double>> query_vector;
    std::optional<bool> action_consistent;
};

// All rules return true to truncate. Verdicts only fire once the window is
// full; earlier turns always continue.
bool t3_check(const std::vector<TurnSignal>& signals, std::size_t k, double delta_min,
              std::size_t t);
bool gn_consistency_rule(bool action_consistent);
bool cd_stall_rule(const std::vector<std::size_t>& size_history, std::size_t k = 3);
bool streak_unknown_rule(const std::vector<std::string>& labels, std::size_t k = 5,
                         const std::string& unknown = "Unknown");
bool pe_sim_drop_rule(const std::vector<double>& sim_gains, std::size_t k = 2);
bool similarity_alpha_rule(const std::vector<std::vector<double>>& query_vectors, double alpha);
bool random_beta_rule(double beta, std::uint64_t seed, std::size_t t);

// Dispatches the configured rule over the turn history; t is the 1-based turn
// just appended (signals.size() == t).
bool evaluate_rule(const TruncationRule& rule, const std::vector<TurnSignal>& signals,
                   const std::vector<std::size_t>& hypothesis_sizes, std::size_t t);

}  // namespace beliefsim
