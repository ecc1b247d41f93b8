#include "nof1/trajectory.hpp"
#include "nof1/errors.hpp"

namespace nof1 {

void Trajectory::validate() const {
    const auto n = static_cast<std::size_t>(t);
    if (t < 1) throw ValidationError("trajectory: t must be >= 1");
    if (a.size() != n || y.size() != n)
        throw ValidationError("trajectory: treatment/outcome length mismatch");
    for (std::size_t k = 0; k < n; ++k)
        if (a[k] != 0 && a[k] != 1)
            throw ValidationError("trajectory: treatment at time " + std::to_string(k + 1) +
                                  " is not 0/1");
    if (!y_level.empty()) {
        if (y_level.size() != n)
            throw ValidationError("trajectory: outcome level coding length mismatch");
        for (int lv : y_level)
            if (lv < 0 || lv >= static_cast<int>(y_level_values.size()))
                throw ValidationError("trajectory: outcome level out of range");
    }
    if (!l_level.empty()) {
        if (l_level.size() != n)
            throw ValidationError("trajectory: covariate coding length mismatch");
        for (int lv : l_level)
            if (lv < 0 || lv >= n_l_levels)
                throw ValidationError("trajectory: covariate level out of range");
    }
    for (const auto& col : covariates)
        if (col.size() != n)
            throw ValidationError("trajectory: covariate column length mismatch");
    if (schedule.has_value()) {
        const auto expected = expand_schedule(*schedule, t);
        if (expected != a)
            throw ValidationError("trajectory: treatments do not follow the attached schedule");
    }
}

std::vector<double> Trajectory::arm_values(int arm) const {
    std::vector<double> out;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] == arm) out.push_back(y[k]);
    return out;
}

} // namespace nof1
