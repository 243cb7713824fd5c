#pragma once

#include <optional>
#include <vector>

#include "beliefsim/belief.hpp"

namespace beliefsim {

// Constants of the belief-trap entry analysis. bbar and U are derived:
//   bbar = 2 (-log(eta) L_pi + 1/eta)
//   U    = max(U0, (Psi0 + bbar + c0) / m_theta)
// delta = m_theta * mu - (c0 + bbar) is the trap margin.
struct TheoryConstants {
    double eta = 0.0;
    double L_pi = 0.0;
    double m_theta = 0.0;
    double c0 = 0.0;
    double U0 = 0.0;
    double Psi0 = 0.0;
    double bbar = 0.0;
    double U = 0.0;
    double mu = 0.0;
    double delta = 0.0;
};

double compute_bbar(double eta, double L_pi);
double compute_threshold_U(const TheoryConstants& consts);

// Explicit hitting-time bound 1 + ceil(log_{1+m}((mU + delta)/(m Delta1 + delta))).
// Returns 1 when the log argument is <= 1; throws when delta <= 0 or the
// denominator is non-positive.
long long hitting_time_bound(double m_theta, double U, double delta, double Delta1);

// Earliest t >= window whose trailing windowed mean of one-step potential
// drift is >= -min_drift (empirical trap-entry surrogate); nullopt if never.
std::optional<std::size_t> detect_btr_entry(const std::vector<double>& psi_series,
                                            std::size_t window, double min_drift);

struct DriftBucket {
    double lo = 0.0, hi = 0.0;  // bucket on the pre-step potential
    std::size_t count = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // 95% normal approximation
};

// Per-bucket one-step drift statistics over a set of potential series.
// Empty buckets are omitted, never reported as zero.
std::vector<DriftBucket> estimate_drift(const std::vector<std::vector<double>>& psi_series,
                                        const std::vector<double>& bucket_edges);

// Least-squares fit of measured update error against potential, restricted to
// points with psi >= U0:  c(psi) ~ m_theta * psi - c0. An estimate, not a
// certified bound.
struct GrowthFit {
    double m_theta = 0.0;
    double c0 = 0.0;
    double U0 = 0.0;
    std::size_t points = 0;
    double residual_rms = 0.0;
};

GrowthFit fit_update_error_growth(const std::vector<double>& psis,
                                  const std::vector<double>& errors, double U0 = 0.0);

// Probe family with a fixed support shape: b(s*) = exp(-psi) and the rest of
// the mass spread uniformly over the first support_size-1 other states.
std::vector<Belief> potential_family(const StateSpace& space, std::size_t support_size,
                                     const std::vector<double>& psi_grid);

}  // namespace beliefsim
