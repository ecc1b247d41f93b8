#include "nof1/diagnostics.hpp"
#include "nof1/errors.hpp"
#include "nof1/stats.hpp"

namespace nof1 {

namespace {

// (time index, outcome) restricted to one arm
void arm_series(const Trajectory& traj, int arm, std::vector<double>& ks,
                std::vector<double>& ys) {
    if (arm != 0 && arm != 1) throw ValidationError("diagnostics: arm must be 0/1");
    ks.clear();
    ys.clear();
    for (std::size_t k = 0; k < traj.a.size(); ++k)
        if (traj.a[k] == arm) {
            ks.push_back(static_cast<double>(k + 1));
            ys.push_back(traj.y[k]);
        }
}

} // namespace

TrendTestResult stationarity_trend_test(const Trajectory& traj, int arm) {
    std::vector<double> ks, ys;
    arm_series(traj, arm, ks, ys);
    if (ks.size() < 3)
        throw EstimationError("stationarity_trend_test: arm needs at least 3 observations");
    const auto fit = stats::ols_slope_test(ks, ys);
    return {fit.slope, fit.p};
}

double stationarity_rank_test(const Trajectory& traj, int arm) {
    std::vector<double> ks, ys;
    arm_series(traj, arm, ks, ys);
    if (ys.size() < 4)
        throw EstimationError("stationarity_rank_test: arm needs at least 4 observations");
    return stats::mann_kendall(ys).p;
}

double split_distribution_check(const Trajectory& traj, int arm) {
    std::vector<double> ks, ys;
    arm_series(traj, arm, ks, ys);
    const std::size_t half = ys.size() / 2;
    if (half < 4 || ys.size() - half < 4)
        throw EstimationError("split_distribution_check: needs at least 4 observations per half");
    const std::vector<double> first(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<double> second(ys.begin() + static_cast<std::ptrdiff_t>(half), ys.end());
    return stats::ks_two_sample(first, second).p;
}

std::vector<DiagnosticsRow> diagnostics_table(const Trajectory& traj) {
    std::vector<DiagnosticsRow> rows;
    for (int arm = 0; arm <= 1; ++arm) {
        const auto trend = stationarity_trend_test(traj, arm);
        rows.push_back({arm, "trend(ols)", trend.slope, trend.p});
        rows.push_back({arm, "trend(rank)", 0.0, stationarity_rank_test(traj, arm)});
        rows.push_back({arm, "split(ks)", 0.0, split_distribution_check(traj, arm)});
    }
    return rows;
}

} // namespace nof1
