#include "beliefsim/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beliefsim/rng.hpp"

namespace beliefsim {

void ValueCalibration::validate() const {
    switch (kind) {
        case CalibrationKind::kIdentity:
            return;
        case CalibrationKind::kAffine:
            if (scale <= 0.0)
                throw std::invalid_argument("ValueCalibration: affine scale must be positive");
            return;
        case CalibrationKind::kLogistic:
            if (steepness <= 0.0)
                throw std::invalid_argument("ValueCalibration: logistic steepness must be positive");
            return;
    }
}

double ValueCalibration::operator()(double x) const {
    switch (kind) {
        case CalibrationKind::kIdentity:
            return x;
        case CalibrationKind::kAffine:
            return scale * x + offset;
        case CalibrationKind::kLogistic:
            return 1.0 / (1.0 + std::exp(-steepness * (x - midpoint)));
    }
    return x;
}

double ValueCalibration::kappa_v() const {
    switch (kind) {
        case CalibrationKind::kIdentity:
            return 1.0;
        case CalibrationKind::kAffine:
            return scale;
        case CalibrationKind::kLogistic: {
            // derivative k*s(1-s) is smallest at the endpoint farther from the midpoint
            auto deriv = [&](double x) {
                const double s = operator()(x);
                return steepness * s * (1.0 - s);
            };
            return std::min(deriv(0.0), deriv(1.0));
        }
    }
    return 1.0;
}

std::vector<double> calibrated_values(const std::vector<double>& beliefs_at_true,
                                      const ValueCalibration& cal) {
    cal.validate();
    std::vector<double> out;
    out.reserve(beliefs_at_true.size());
    for (double p : beliefs_at_true) {
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw std::invalid_argument("calibrated_values: input outside [0,1]");
        out.push_back(cal(std::clamp(p, 0.0, 1.0)));
    }
    return out;
}

std::vector<double> td_errors(const std::vector<double>& rewards,
                              const std::vector<double>& values, double gamma) {
    if (values.size() != rewards.size() + 1)
        throw std::invalid_argument("td_errors: need |values| == |rewards| + 1");
    std::vector<double> deltas(rewards.size());
    for (std::size_t t = 0; t < rewards.size(); ++t)
        deltas[t] = rewards[t] + gamma * values[t + 1] - values[t];
    return deltas;
}

double gae(const std::vector<double>& deltas, double gamma, double lambda, std::size_t t) {
    if (t >= deltas.size()) throw std::invalid_argument("gae: t out of range");
    const double q = gamma * lambda;
    double acc = 0.0, w = 1.0;
    for (std::size_t j = t; j < deltas.size(); ++j) {
        acc += w * deltas[j];
        w *= q;
    }
    return acc;
}

double truncated_gae(const std::vector<double>& deltas, double gamma, double lambda,
                     std::size_t t, std::size_t t_s) {
    if (t >= t_s) throw std::invalid_argument("truncated_gae: need t < t_s");
    if (t_s > deltas.size()) throw std::invalid_argument("truncated_gae: t_s out of range");
    const double q = gamma * lambda;
    double acc = 0.0, w = 1.0;
    for (std::size_t j = t; j < t_s; ++j) {
        acc += w * deltas[j];
        w *= q;
    }
    return acc;
}

namespace {

// sum_{j=lo}^{hi} q^j (empty when hi < lo)
double geometric_range(std::size_t lo, std::size_t hi, double q) {
    if (hi + 1 <= lo) return 0.0;
    const std::size_t terms = hi - lo + 1;
    if (q == 1.0) return static_cast<double>(terms);
    return std::pow(q, static_cast<double>(lo)) *
           (1.0 - std::pow(q, static_cast<double>(terms))) / (1.0 - q);
}

}  // namespace

GeometricSums geometric_sums(std::size_t t, std::size_t t_s, std::size_t horizon, double gamma,
                             double lambda) {
    if (!(t < t_s && t_s < horizon))
        throw std::invalid_argument("geometric_sums: need t < t_s < horizon");
    const double q = gamma * lambda;
    GeometricSums sums;
    sums.pre = geometric_range(0, t_s - t - 1, q);
    if (horizon >= t + 2 && horizon - t - 2 >= t_s - t)
        sums.tail = geometric_range(t_s - t, horizon - t - 2, q);
    return sums;
}

double inversion_threshold(std::size_t t, std::size_t t_s, std::size_t horizon, double gamma,
                           double lambda) {
    const GeometricSums sums = geometric_sums(t, t_s, horizon, gamma, lambda);
    if (sums.tail <= 0.0)
        throw std::invalid_argument("inversion_threshold: empty tail");
    return sums.pre / sums.tail;
}

void SyntheticDriftConfig::validate() const {
    if (t_s == 0 || t_s + 1 >= horizon)
        throw std::invalid_argument("SyntheticDriftConfig: need 0 < t_s < horizon - 1");
    if (rho_b < 0.0 || noise_std < 0.0)
        throw std::invalid_argument("SyntheticDriftConfig: negative drift or noise");
}

SyntheticTrajectory generate_drift_trajectory(const SyntheticDriftConfig& config,
                                              std::uint64_t index) {
    config.validate();
    RngStream rng(config.seed, index);
    SyntheticTrajectory traj;
    traj.values.reserve(config.horizon + 1);
    traj.values.push_back(config.v0);
    for (std::size_t k = 1; k < config.horizon; ++k) {
        double v;
        if (k <= config.t_s) {
            v = traj.values.back() + config.pre_rise;
        } else {
            v = traj.values.back() - config.rho_b + config.noise_std * rng.next_gaussian();
        }
        if (config.clip) {
            const double clipped = std::clamp(v, 0.0, 1.0);
            if (clipped != v) traj.clipped = true;
            v = clipped;
        }
        traj.values.push_back(v);
    }
    traj.values.push_back(0.0);  // terminal bootstrap

    traj.rewards.assign(config.horizon, 0.0);
    // unbiased terminal sample of the last value: E[delta_{T-1}] = 0
    traj.rewards.back() = traj.values[config.horizon - 1] + config.noise_std * rng.next_gaussian();
    return traj;
}

std::vector<AdvantageRow> advantage_report(const std::vector<double>& deltas, double gamma,
                                           double lambda, std::size_t t_s) {
    if (t_s > deltas.size())
        throw std::invalid_argument("advantage_report: t_s out of range");
    const std::size_t horizon = deltas.size();
    std::vector<AdvantageRow> rows;
    rows.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        AdvantageRow row;
        row.t = t;
        row.delta = deltas[t];
        row.a_hat = gae(deltas, gamma, lambda, t);
        row.t_s = t_s;
        if (t < t_s) {
            row.a_hat_pre = truncated_gae(deltas, gamma, lambda, t, t_s);
            if (t_s < horizon) {
                const GeometricSums sums = geometric_sums(t, t_s, horizon, gamma, lambda);
                row.s_pre = sums.pre;
                row.s_tail = sums.tail;
            } else {
                row.s_pre = geometric_range(0, t_s - t - 1, gamma * lambda);
                row.s_tail = 0.0;
            }
        } else {
            row.a_hat_pre = row.a_hat;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace beliefsim
