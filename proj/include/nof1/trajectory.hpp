#ifndef NOF1_TRAJECTORY_HPP
#define NOF1_TRAJECTORY_HPP

#include "nof1/schedule.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nof1 {

// One individual's panel: treatments, outcomes and (optionally) a discrete
// time-varying covariate, indexed k = 1..t. Outcomes are stored as real values;
// when the outcome is discrete the level codes and the level -> value map are
// kept alongside so kernel estimation can work on codes while effect estimates
// stay on the outcome scale.
struct Trajectory {
    int t = 0;
    std::vector<int> a;       // length t, values in {0,1}
    std::vector<double> y;    // length t

    // discrete coding (empty when the outcome / covariate is not coded)
    std::vector<int> y_level;
    std::vector<double> y_level_values; // level code -> numeric value
    std::vector<int> l_level;
    int n_l_levels = 0;

    // free-form numeric covariate columns (used by the regression models)
    std::vector<std::string> covariate_names;
    std::vector<std::vector<double>> covariates; // covariates[c][k-1]

    std::optional<Schedule> schedule; // provenance when generated cyclically
    std::string u_label;              // provenance of the baseline stratum

    void validate() const; // throws ValidationError on broken invariants

    std::vector<double> arm_values(int arm) const; // outcomes with A_k == arm
};

} // namespace nof1

#endif
