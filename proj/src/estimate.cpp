#include "nof1/estimate.hpp"
#include "nof1/errors.hpp"
#include "nof1/stats.hpp"

#include <algorithm>
#include <cmath>

namespace nof1 {

double tau_hat(const Trajectory& traj) {
    const auto treated = traj.arm_values(1);
    const auto control = traj.arm_values(0);
    if (treated.empty()) throw EstimationError("tau_hat: no treated time points");
    if (control.empty()) throw EstimationError("tau_hat: no comparator time points");
    return stats::mean(treated) - stats::mean(control);
}

std::pair<double, double> arm_variances(const Trajectory& traj) {
    const auto treated = traj.arm_values(1);
    const auto control = traj.arm_values(0);
    if (treated.size() < 2)
        throw EstimationError("arm_variances: treated arm has fewer than 2 observations");
    if (control.size() < 2)
        throw EstimationError("arm_variances: comparator arm has fewer than 2 observations");
    return {stats::sample_variance(treated), stats::sample_variance(control)};
}

Estimate tau_hat_ci(const Trajectory& traj, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw ValidationError("tau_hat_ci: level must lie in (0,1)");
    const auto treated = traj.arm_values(1);
    const auto control = traj.arm_values(0);

    Estimate est;
    est.point = tau_hat(traj);
    est.level = level;
    est.n_treated = static_cast<int>(treated.size());
    est.n_control = static_cast<int>(control.size());
    est.method = "mean-difference/normal";

    if (treated.size() < 2 || control.size() < 2) {
        est.has_ci = false;
        est.se = 0.0;
        est.ci_low = est.ci_high = est.point;
        est.method += " (point only: arm too small for a variance estimate)";
        return est;
    }

    const auto [v1, v0] = arm_variances(traj);
    est.se = std::sqrt(v1 / static_cast<double>(treated.size()) +
                       v0 / static_cast<double>(control.size()));
    const double z = stats::normal_quantile(0.5 + level / 2.0);
    est.ci_low = est.point - z * est.se;
    est.ci_high = est.point + z * est.se;
    return est;
}

double t_test(const Trajectory& traj) {
    const auto treated = traj.arm_values(1);
    const auto control = traj.arm_values(0);
    if (treated.size() < 2 || control.size() < 2)
        throw EstimationError("t_test: each arm needs at least 2 observations");
    return stats::welch_t_test(treated, control).p;
}

double approx_variance(double sigma2, int t, double alpha) {
    if (sigma2 < 0.0) throw ValidationError("approx_variance: sigma2 must be >= 0");
    if (t < 1) throw ValidationError("approx_variance: t must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("approx_variance: alpha must lie in (0,1)");
    return sigma2 / (static_cast<double>(t) * alpha * (1.0 - alpha));
}

ConstantNoiseReport constant_noise_check(const Trajectory& traj, double tol) {
    if (tol < 0.0) throw ValidationError("constant_noise_check: tol must be >= 0");
    ConstantNoiseReport report;
    for (int arm = 0; arm <= 1; ++arm) {
        // the widest within-arm pair witnesses every violation
        int lo = -1, hi = -1;
        for (std::size_t k = 0; k < traj.a.size(); ++k) {
            if (traj.a[k] != arm) continue;
            if (lo < 0 || traj.y[k] < traj.y[static_cast<std::size_t>(lo)]) lo = static_cast<int>(k);
            if (hi < 0 || traj.y[k] > traj.y[static_cast<std::size_t>(hi)]) hi = static_cast<int>(k);
        }
        if (lo < 0) continue;
        if (traj.y[static_cast<std::size_t>(hi)] - traj.y[static_cast<std::size_t>(lo)] > tol) {
            report.passed = false;
            report.witnesses.emplace_back(std::min(lo, hi) + 1, std::max(lo, hi) + 1);
        }
    }
    return report;
}

} // namespace nof1
