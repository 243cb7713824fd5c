#include "beliefsim/truncation.hpp"

#include <stdexcept>

#include "beliefsim/environments.hpp"
#include "beliefsim/rng.hpp"

namespace beliefsim {

std::string rule_kind_name(RuleKind kind) {
    switch (kind) {
        case RuleKind::kNone: return "none";
        case RuleKind::kT3Window: return "t3_window";
        case RuleKind::kGnConsistency: return "gn_consistency";
        case RuleKind::kCdStall: return "cd_stall";
        case RuleKind::kStreakUnknown: return "streak_unknown";
        case RuleKind::kPeSimDrop: return "pe_sim_drop";
        case RuleKind::kSimilarityAlpha: return "similarity_alpha";
        case RuleKind::kRandomBeta: return "random_beta";
    }
    return "none";
}

RuleKind rule_kind_from_name(const std::string& name) {
    if (name == "none") return RuleKind::kNone;
    if (name == "t3_window") return RuleKind::kT3Window;
    if (name == "gn_consistency") return RuleKind::kGnConsistency;
    if (name == "cd_stall") return RuleKind::kCdStall;
    if (name == "streak_unknown") return RuleKind::kStreakUnknown;
    if (name == "pe_sim_drop") return RuleKind::kPeSimDrop;
    if (name == "similarity_alpha") return RuleKind::kSimilarityAlpha;
    if (name == "random_beta") return RuleKind::kRandomBeta;
    throw std::invalid_argument("unknown truncation rule: " + name);
}

void TruncationRule::validate() const {
    if (k < 1) throw std::invalid_argument("TruncationRule: k must be >= 1");
    if (kind == RuleKind::kT3Window && delta_min <= 0.0)
        throw std::invalid_argument("TruncationRule: delta_min must be positive");
    if (kind == RuleKind::kSimilarityAlpha && (alpha <= 0.0 || alpha >= 1.0))
        throw std::invalid_argument("TruncationRule: alpha must lie in (0,1)");
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("TruncationRule: beta must lie in [0,1]");
}

bool t3_check(const std::vector<TurnSignal>& signals, std::size_t k, double delta_min,
              std::size_t t) {
    if (t > signals.size()) throw std::invalid_argument("t3_check: t beyond history");
    if (t < k) return false;  // window not yet full
    for (std::size_t tau = t - k; tau < t; ++tau) {
        if (!signals[tau].progress)
            throw std::invalid_argument("t3_check: missing progress signal in window");
        if (*signals[tau].progress >= delta_min) return false;
    }
    return true;
}

bool gn_consistency_rule(bool action_consistent) { return !action_consistent; }

bool cd_stall_rule(const std::vector<std::size_t>& size_history, std::size_t k) {
    if (size_history.size() < k + 1) return false;
    for (std::size_t i = size_history.size() - k; i < size_history.size(); ++i)
        if (size_history[i] < size_history[i - 1]) return false;  // a decrease in the window
    return true;
}

bool streak_unknown_rule(const std::vector<std::string>& labels, std::size_t k,
                         const std::string& unknown) {
    if (labels.size() < k) return false;
    for (std::size_t i = labels.size() - k; i < labels.size(); ++i)
        if (labels[i] != unknown) return false;
    return true;
}

bool pe_sim_drop_rule(const std::vector<double>& sim_gains, std::size_t k) {
    if (sim_gains.size() < k) return false;
    for (std::size_t i = sim_gains.size() - k; i < sim_gains.size(); ++i)
        if (sim_gains[i] >= 0.0) return false;  // zero gain is not a decrease
    return true;
}

bool similarity_alpha_rule(const std::vector<std::vector<double>>& query_vectors, double alpha) {
    if (query_vectors.size() < 2) return false;
    const auto& current = query_vectors.back();
    for (std::size_t i = 0; i + 1 < query_vectors.size(); ++i)
        if (cosine_similarity(current, query_vectors[i]) > alpha) return true;
    return false;
}

bool random_beta_rule(double beta, std::uint64_t seed, std::size_t t) {
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("random_beta_rule: beta must lie in [0,1]");
    if (beta == 0.0) return false;
    RngStream rng(seed, t);
    return rng.next_double() < beta;
}

bool evaluate_rule(const TruncationRule& rule, const std::vector<TurnSignal>& signals,
                   const std::vector<std::size_t>& hypothesis_sizes, std::size_t t) {
    switch (rule.kind) {
        case RuleKind::kNone:
            return false;
        case RuleKind::kT3Window:
            return t3_check(signals, rule.k, rule.delta_min, t);
        case RuleKind::kGnConsistency: {
            if (signals.empty() || !signals.back().action_consistent)
                throw std::invalid_argument("evaluate_rule: missing consistency signal");
            return gn_consistency_rule(*signals.back().action_consistent);
        }
        case RuleKind::kCdStall:
            return cd_stall_rule(hypothesis_sizes, rule.k);
        case RuleKind::kStreakUnknown: {
            std::vector<std::string> labels;
            labels.reserve(signals.size());
            for (const auto& s : signals)
                if (s.feedback_label) labels.push_back(*s.feedback_label);
            return streak_unknown_rule(labels, rule.k);
        }
        case RuleKind::kPeSimDrop: {
            std::vector<double> gains;
            gains.reserve(signals.size());
            for (const auto& s : signals)
                if (s.similarity_gain) gains.push_back(*s.similarity_gain);
            return pe_sim_drop_rule(gains, rule.k);
        }
        case RuleKind::kSimilarityAlpha: {
            std::vector<std::vector<double>> vectors;
            vectors.reserve(signals.size());
            for (const auto& s : signals)
                if (s.query_vector) vectors.push_back(*s.query_vector);
            return similarity_alpha_rule(vectors, rule.alpha);
        }
        case RuleKind::kRandomBeta:
            return random_beta_rule(rule.beta, rule.seed, t);
    }
    return false;
}

}  // namespace beliefsim
