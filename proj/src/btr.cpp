#include "beliefsim/btr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beliefsim {

double compute_bbar(double eta, double L_pi) {
    if (eta <= 0.0 || eta > 1.0)
        throw std::invalid_argument("compute_bbar: eta must lie in (0, 1]");
    if (L_pi < 0.0) throw std::invalid_argument("compute_bbar: L_pi must be >= 0");
    return 2.0 * (-std::log(eta) * L_pi + 1.0 / eta);
}

double compute_threshold_U(const TheoryConstants& consts) {
    if (consts.m_theta <= 0.0)
        throw std::invalid_argument("compute_threshold_U: m_theta must be positive");
    return std::max(consts.U0, (consts.Psi0 + consts.bbar + consts.c0) / consts.m_theta);
}

long long hitting_time_bound(double m_theta, double U, double delta, double Delta1) {
    if (m_theta <= 0.0)
        throw std::invalid_argument("hitting_time_bound: m_theta must be positive");
    if (delta <= 0.0)
        throw std::invalid_argument("hitting_time_bound: requires trap margin delta > 0");
    const double num = m_theta * U + delta;
    const double den = m_theta * Delta1 + delta;
    if (den <= 0.0)
        throw std::invalid_argument("hitting_time_bound: non-positive denominator");
    const double arg = num / den;
    if (arg <= 1.0) return 1;
    return 1 + static_cast<long long>(std::ceil(std::log(arg) / std::log1p(m_theta) - 1e-12));
}

std::optional<std::size_t> detect_btr_entry(const std::vector<double>& psi_series,
                                            std::size_t window, double min_drift) {
    if (window == 0) throw std::invalid_argument("detect_btr_entry: window must be >= 1");
    if (psi_series.size() < window + 1) return std::nullopt;
    for (std::size_t t = window; t < psi_series.size(); ++t) {
        double mean = 0.0;
        for (std::size_t tau = t - window; tau < t; ++tau)
            mean += psi_series[tau + 1] - psi_series[tau];
        mean /= static_cast<double>(window);
        if (mean >= -min_drift) return t;
    }
    return std::nullopt;
}

std::vector<DriftBucket> estimate_drift(const std::vector<std::vector<double>>& psi_series,
                                        const std::vector<double>& bucket_edges) {
    if (bucket_edges.size() < 2)
        throw std::invalid_argument("estimate_drift: need at least two bucket edges");
    if (!std::is_sorted(bucket_edges.begin(), bucket_edges.end()))
        throw std::invalid_argument("estimate_drift: bucket edges must be sorted");

    const std::size_t buckets = bucket_edges.size() - 1;
    std::vector<std::size_t> count(buckets, 0);
    std::vector<double> sum(buckets, 0.0), sum_sq(buckets, 0.0);
    for (const auto& series : psi_series) {
        for (std::size_t t = 0; t + 1 < series.size(); ++t) {
            const double psi = series[t];
            if (psi < bucket_edges.front() || psi >= bucket_edges.back()) continue;
            const std::size_t b =
                static_cast<std::size_t>(std::upper_bound(bucket_edges.begin(), bucket_edges.end(),
                                                          psi) -
                                         bucket_edges.begin()) -
                1;
            const double d = series[t + 1] - series[t];
            ++count[b];
            sum[b] += d;
            sum_sq[b] += d * d;
        }
    }

    std::vector<DriftBucket> out;
    for (std::size_t b = 0; b < buckets; ++b) {
        if (count[b] == 0) continue;  // absent, not zero
        DriftBucket bucket;
        bucket.lo = bucket_edges[b];
        bucket.hi = bucket_edges[b + 1];
        bucket.count = count[b];
        const double n = static_cast<double>(count[b]);
        bucket.mean = sum[b] / n;
        const double var = std::max(0.0, sum_sq[b] / n - bucket.mean * bucket.mean);
        bucket.std_error = std::sqrt(var / n);
        bucket.ci_lo = bucket.mean - 1.959963984540054 * bucket.std_error;
        bucket.ci_hi = bucket.mean + 1.959963984540054 * bucket.std_error;
        out.push_back(bucket);
    }
    return out;
}

GrowthFit fit_update_error_growth(const std::vector<double>& psis,
                                  const std::vector<double>& errors, double U0) {
    if (psis.size() != errors.size())
        throw std::invalid_argument("fit_update_error_growth: size mismatch");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < psis.size(); ++i) {
        if (psis[i] < U0) continue;
        sx += psis[i];
        sy += errors[i];
        sxx += psis[i] * psis[i];
        sxy += psis[i] * errors[i];
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_update_error_growth: need >= 2 points above U0");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0)
        throw std::invalid_argument("fit_update_error_growth: degenerate psi sample");
    GrowthFit fit;
    fit.m_theta = (dn * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.m_theta * sx) / dn;
    fit.c0 = -intercept;
    fit.U0 = U0;
    fit.points = n;
    double rss = 0.0;
    for (std::size_t i = 0; i < psis.size(); ++i) {
        if (psis[i] < U0) continue;
        const double r = errors[i] - (fit.m_theta * psis[i] + intercept);
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / dn);
    return fit;
}

std::vector<Belief> potential_family(const StateSpace& space, std::size_t support_size,
                                     const std::vector<double>& psi_grid) {
    const std::size_t n = space.size();
    if (support_size < 2 || support_size > n)
        throw std::invalid_argument("potential_family: support size must lie in [2, |S|]");
    std::vector<Belief> family;
    family.reserve(psi_grid.size());
    for (double psi : psi_grid) {
        if (psi < 0.0) throw std::invalid_argument("potential_family: psi must be >= 0");
        Belief b{std::vector<double>(n, 0.0)};
        const double p_true = std::exp(-psi);
        b.probs[space.true_state_index] = p_true;
        const double rest = (1.0 - p_true) / static_cast<double>(support_size - 1);
        std::size_t placed = 0;
        for (StateIndex s = 0; s < n && placed + 1 < support_size; ++s) {
            if (s == space.true_state_index) continue;
            b.probs[s] = rest;
            ++placed;
        }
        family.push_back(std::move(b));
    }
    return family;
}

}  // namespace beliefsim
