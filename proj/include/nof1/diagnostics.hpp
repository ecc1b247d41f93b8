#ifndef NOF1_DIAGNOSTICS_HPP
#define NOF1_DIAGNOSTICS_HPP

#include "nof1/trajectory.hpp"

#include <string>
#include <vector>

namespace nof1 {

// Falsification checks for a time-stable outcome process: within one treatment
// arm the outcome distribution should not drift. These are standard
// approximate tests, not exact finite-sample procedures.

struct TrendTestResult {
    double slope = 0.0;
    double p = 1.0;
};

// least-squares regression of the outcome on the time index within the arm,
// with a two-sided test of zero slope
TrendTestResult stationarity_trend_test(const Trajectory& traj, int arm);

// Mann-Kendall monotone-trend test within the arm (normal approximation,
// tie-corrected variance)
double stationarity_rank_test(const Trajectory& traj, int arm);

// two-sample Kolmogorov-Smirnov between the first and second half of the arm
double split_distribution_check(const Trajectory& traj, int arm);

struct DiagnosticsRow {
    int arm;
    std::string test;
    double statistic;
    double p;
};

// all three checks for both arms, as a report table
std::vector<DiagnosticsRow> diagnostics_table(const Trajectory& traj);

} // namespace nof1

#endif
