#include "nof1/series.hpp"
#include "nof1/errors.hpp"
#include "nof1/stats.hpp"

#include <cmath>

namespace nof1 {

namespace {

Estimate mean_with_normal_ci(std::span<const double> values, double level,
                             const std::string& method) {
    if (values.size() < 2)
        throw EstimationError(method + ": needs at least 2 individuals");
    Estimate est;
    est.point = stats::mean(values);
    est.se = std::sqrt(stats::sample_variance(values) / static_cast<double>(values.size()));
    est.level = level;
    const double z = stats::normal_quantile(0.5 + level / 2.0);
    est.ci_low = est.point - z * est.se;
    est.ci_high = est.point + z * est.se;
    est.method = method;
    return est;
}

} // namespace

Estimate aggregate_tau(std::span<const double> taus, double level) {
    auto est = mean_with_normal_ci(taus, level, "series/mean-of-tau");
    est.n_treated = est.n_control = static_cast<int>(taus.size());
    return est;
}

std::vector<Estimate> aggregate_gformula(const std::vector<std::vector<double>>& per_individual,
                                         double level) {
    if (per_individual.size() < 2)
        throw EstimationError("aggregate_gformula: needs at least 2 individuals");
    const std::size_t width = per_individual.front().size();
    for (const auto& series : per_individual)
        if (series.size() != width)
            throw ValidationError("aggregate_gformula: individuals cover different time grids");
    std::vector<Estimate> out;
    out.reserve(width);
    std::vector<double> column(per_individual.size());
    for (std::size_t kk = 0; kk < width; ++kk) {
        for (std::size_t i = 0; i < per_individual.size(); ++i) column[i] = per_individual[i][kk];
        auto est = mean_with_normal_ci(column, level, "series/mean-of-gformula");
        est.n_treated = est.n_control = static_cast<int>(per_individual.size());
        out.push_back(est);
    }
    return out;
}

Estimate parallel_contrast(const std::vector<Trajectory>& trajectories, int k, double level) {
    if (k < 1) throw ValidationError("parallel_contrast: k must be >= 1");
    std::vector<double> treated, control;
    for (const auto& traj : trajectories) {
        if (k > traj.t)
            throw ValidationError("parallel_contrast: time " + std::to_string(k) +
                                  " beyond an individual's horizon");
        const std::size_t idx = static_cast<std::size_t>(k - 1);
        (traj.a[idx] == 1 ? treated : control).push_back(traj.y[idx]);
    }
    if (treated.size() < 2 || control.size() < 2)
        throw EstimationError("parallel_contrast: treatment one-sided at time " +
                              std::to_string(k));
    Estimate est;
    est.point = stats::mean(treated) - stats::mean(control);
    est.se = std::sqrt(stats::sample_variance(treated) / static_cast<double>(treated.size()) +
                       stats::sample_variance(control) / static_cast<double>(control.size()));
    est.level = level;
    const double z = stats::normal_quantile(0.5 + level / 2.0);
    est.ci_low = est.point - z * est.se;
    est.ci_high = est.point + z * est.se;
    est.n_treated = static_cast<int>(treated.size());
    est.n_control = static_cast<int>(control.size());
    est.method = "series/parallel-contrast";
    return est;
}

} // namespace nof1
