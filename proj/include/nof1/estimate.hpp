#ifndef NOF1_ESTIMATE_HPP
#define NOF1_ESTIMATE_HPP

#include "nof1/trajectory.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nof1 {

// Point estimate with its uncertainty summary.
struct Estimate {
    double point = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;
    int n_treated = 0;
    int n_control = 0;
    bool has_ci = true;
    std::string method;
};

// Mean outcome over treated time points minus mean over comparator time points.
double tau_hat(const Trajectory& traj);

// within-arm unbiased sample variances (treated, comparator)
std::pair<double, double> arm_variances(const Trajectory& traj);

// tau_hat with a large-sample normal confidence interval,
// se^2 = s1^2/n1 + s0^2/n0
Estimate tau_hat_ci(const Trajectory& traj, double level = 0.95);

// Welch unequal-variance two-sample t test of zero effect; two-sided p-value.
double t_test(const Trajectory& traj);

// Large-t variance approximation sigma2 / (t * alpha * (1 - alpha)) for a
// schedule with treated fraction alpha.
double approx_variance(double sigma2, int t, double alpha);

struct ConstantNoiseReport {
    bool passed = true;
    // one violating index pair (1-based) per arm, when found
    std::vector<std::pair<int, int>> witnesses;
};

// Checks the degenerate-noise signature: outcomes must repeat exactly within
// an arm. Returns a witness pair per violating arm.
ConstantNoiseReport constant_noise_check(const Trajectory& traj, double tol);

} // namespace nof1

#endif
