#ifndef NOF1_SERIES_HPP
#define NOF1_SERIES_HPP

#include "nof1/estimate.hpp"
#include "nof1/trajectory.hpp"

#include <span>
#include <vector>

namespace nof1 {

// Aggregation of many single-participant trials into population-level
// estimates.

// Mean of per-individual mean-difference estimates, with the empirical
// between-individual standard error.
Estimate aggregate_tau(std::span<const double> taus, double level = 0.95);

// Per-time mean of per-individual effect series (all on one k grid).
std::vector<Estimate> aggregate_gformula(const std::vector<std::vector<double>>& per_individual,
                                         double level = 0.95);

// Cross-sectional contrast at time k: mean outcome of individuals treated at k
// minus mean outcome of those untreated at k. Valid without any stationarity
// assumption when schedules are randomized; the time-varying covariate never
// enters.
Estimate parallel_contrast(const std::vector<Trajectory>& trajectories, int k,
                           double level = 0.95);

} // namespace nof1

#endif
