#pragma once

#include <cstdint>
#include <vector>

#include "beliefsim/belief.hpp"

namespace beliefsim {

enum class CalibrationKind { kIdentity, kAffine, kLogistic };

// Increasing value calibration g over [0,1] with a certified lower bound
// kappa_v on its derivative.
struct ValueCalibration {
    CalibrationKind kind = CalibrationKind::kIdentity;
    double scale = 1.0;      // affine: g(x) = scale * x + offset
    double offset = 0.0;
    double steepness = 4.0;  // logistic: g(x) = 1 / (1 + exp(-steepness (x - midpoint)))
    double midpoint = 0.5;

    void validate() const;
    double operator()(double x) const;
    double kappa_v() const;  // min derivative over [0,1], closed form
};

// Elementwise g over beliefs-at-truth; inputs must lie in [0,1].
std::vector<double> calibrated_values(const std::vector<double>& beliefs_at_true,
                                      const ValueCalibration& cal);

// TD errors d_t = r_t + gamma * V_{t+1} - V_t. values has one more entry than
// rewards; the final value is the terminal bootstrap (0 for episodic tasks).
std::vector<double> td_errors(const std::vector<double>& rewards,
                              const std::vector<double>& values, double gamma);

// Full advantage at step t: sum_j (gamma*lambda)^j d_{t+j}.
double gae(const std::vector<double>& deltas, double gamma, double lambda, std::size_t t);

// Advantage truncated at t_s: sum over j < t_s - t only.
double truncated_gae(const std::vector<double>& deltas, double gamma, double lambda,
                     std::size_t t, std::size_t t_s);

struct GeometricSums {
    double pre = 0.0;   // sum_{j=0}^{t_s-t-1} q^j
    double tail = 0.0;  // sum_{j=t_s-t}^{T-t-2} q^j
};

GeometricSums geometric_sums(std::size_t t, std::size_t t_s, std::size_t horizon, double gamma,
                             double lambda);

// S_pre / S_tail; the advantage sign flips once kappa_v * rho_b exceeds it.
// Equals (t_s - t) / (horizon - 1 - t_s) at gamma*lambda = 1.
double inversion_threshold(std::size_t t, std::size_t t_s, std::size_t horizon, double gamma,
                           double lambda);

// Synthetic value-drift process for the inversion and truncation-gap checks:
// the value rises by pre_rise per step before t_s, then drifts down by rho_b
// (plus noise) per step; the terminal reward is an unbiased sample of the
// final value, so the terminal TD error has mean zero.
struct SyntheticDriftConfig {
    std::size_t t_s = 2;
    std::size_t horizon = 13;  // T: rewards 0..T-1, values 0..T (bootstrap 0)
    double v0 = 0.0;
    double pre_rise = 1.0;
    double rho_b = 0.1;
    double noise_std = 0.05;
    bool clip = false;  // clip values to [0,1]; clipped runs are flagged
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticTrajectory {
    std::vector<double> values;   // size horizon + 1, terminal bootstrap 0
    std::vector<double> rewards;  // size horizon, sparse: only the last entry non-zero
    bool clipped = false;
};

SyntheticTrajectory generate_drift_trajectory(const SyntheticDriftConfig& config,
                                              std::uint64_t index);

// Per-step report for one trajectory and one anchor step t.
struct AdvantageRow {
    std::size_t t = 0;
    double delta = 0.0;
    double a_hat = 0.0;
    std::size_t t_s = 0;
    double a_hat_pre = 0.0;
    double s_pre = 0.0;
    double s_tail = 0.0;
};

std::vector<AdvantageRow> advantage_report(const std::vector<double>& deltas, double gamma,
                                           double lambda, std::size_t t_s);

}  // namespace beliefsim
