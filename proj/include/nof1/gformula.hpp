#ifndef NOF1_GFORMULA_HPP
#define NOF1_GFORMULA_HPP

#include "nof1/estimate.hpp"
#include "nof1/rng.hpp"
#include "nof1/scm.hpp"
#include "nof1/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nof1 {

// Time points grouped by local treatment pattern: single[x] holds every k with
// A_k = x; doubled[x] every k with A_k = A_{k-1} = x. Indices are 1-based and
// start at first_k (= 2 unless a pre-study treatment constant is assumed).
struct IndexSets {
    std::vector<int> single[2];
    std::vector<int> doubled[2];
};

IndexSets index_sets(const Trajectory& traj, int first_k = 2);
IndexSets index_sets(std::span<const int> a, int first_k = 2);

// Returns a copy with the outcome coded to discrete levels (first-appearance
// order) and, when `covariate` names a column, that column coded as the
// discrete time-varying covariate.
Trajectory code_levels(const Trajectory& traj, const std::string& covariate = "");

// Frequency-estimated conditional distributions pooled over qualifying time
// points: gy[x] is P(y | l, y_prev, l_prev) from doubled-x points, gl[x] is
// P(l | y_prev, l_prev) from single-x points. Rows never observed are flagged
// invalid when kappa = 0, or filled by Laplace smoothing when kappa > 0.
class GKernels {
public:
    int ny = 0;
    int nl = 1;
    std::vector<double> y_values;
    double kappa = 0.0;

    std::vector<double> gy[2], gl[2];
    std::vector<double> gy_counts[2], gl_counts[2]; // raw row totals
    std::vector<char> gy_valid[2], gl_valid[2];

    std::size_t gy_rows() const { return static_cast<std::size_t>(nl * ny * nl); }
    std::size_t gl_rows() const { return static_cast<std::size_t>(ny * nl); }
    std::size_t gy_row_index(int l, int y_prev, int l_prev) const {
        return (static_cast<std::size_t>(l) * static_cast<std::size_t>(ny) +
                static_cast<std::size_t>(y_prev)) * static_cast<std::size_t>(nl) +
               static_cast<std::size_t>(l_prev);
    }
    std::size_t gl_row_index(int y_prev, int l_prev) const {
        return static_cast<std::size_t>(y_prev) * static_cast<std::size_t>(nl) +
               static_cast<std::size_t>(l_prev);
    }
    std::span<const double> gy_row(int x, int l, int y_prev, int l_prev) const;
    std::span<const double> gl_row(int x, int y_prev, int l_prev) const;
    bool gy_row_valid(int x, int l, int y_prev, int l_prev) const;
    bool gl_row_valid(int x, int y_prev, int l_prev) const;

    void allocate();
};

// Pooled frequency fit over all qualifying time points. Throws EstimationError
// when a doubled/single index set needed for some x is empty.
GKernels fit_kernels(const Trajectory& traj, double kappa, int first_k = 2);

// The model's own conditional laws restricted to the constant-treatment
// patterns, for oracle-substitution checks.
GKernels kernels_from_scm(const DiscreteScm& scm, int u);

// Counterfactual outcome mean at horizon k under always-x, by forward
// propagation of the joint (y, l) state from the given pre-period state.
// Throws EstimationError with row coordinates when it needs a flagged row.
double theta_dp(const GKernels& kernels, int k, int x, int y0, int l0);

// theta for every horizon 1..k_max in one forward pass
std::vector<double> theta_dp_series(const GKernels& kernels, int k_max, int x, int y0, int l0);

// theta(1) - theta(0)
double ucate_hat_gformula(const GKernels& kernels, int k, int y0, int l0);
std::vector<double> ucate_hat_gformula_series(const GKernels& kernels, int k_max, int y0, int l0);

// --- conditional models for g-computation -----------------------------------

// State carried between time points while generating a synthetic trajectory.
struct StepState {
    double y = 0.0;
    int y_level = 0;
    int l_level = 0;
    std::vector<double> cov; // numeric covariate values
};

// fit / sample abstraction over (L_k | parents) and (Y_k | parents)
class ConditionalModel {
public:
    virtual ~ConditionalModel() = default;
    virtual void fit(const Trajectory& traj) = 0;
    virtual bool fitted() const = 0;
    // state the generation is conditioned on (the first observed time point)
    virtual StepState initial_state(const Trajectory& traj) const = 0;
    // draw (L_k, Y_k) given the previous state and the treatments at k and k-1
    virtual StepState advance(const StepState& prev, int a, int a_prev, int k, Rng& rng) const = 0;
    virtual std::unique_ptr<ConditionalModel> fresh() const = 0; // unfitted copy
};

// Tabular model: full conditional tables stratified by the local treatment
// pattern, so synthetic data can be generated under any treatment sequence.
// The constant-pattern slices coincide with GKernels.
class CategoricalModel : public ConditionalModel {
public:
    explicit CategoricalModel(double kappa = 0.0) : kappa_(kappa) {}
    // adopt a model's exact conditional laws instead of fitting
    static std::unique_ptr<CategoricalModel> from_scm(const DiscreteScm& scm, int u);

    void fit(const Trajectory& traj) override;
    bool fitted() const override { return fitted_; }
    StepState initial_state(const Trajectory& traj) const override;
    StepState advance(const StepState& prev, int a, int a_prev, int k, Rng& rng) const override;
    std::unique_ptr<ConditionalModel> fresh() const override;

    GKernels constant_pattern_kernels() const; // the (x,x) slices

    int ny() const { return ny_; }
    int nl() const { return nl_; }
    const std::vector<double>& y_values() const { return y_values_; }

private:
    double kappa_;
    bool fitted_ = false;
    int ny_ = 0, nl_ = 1;
    std::vector<double> y_values_, l_values_;
    // y table rows: (a, a_prev, l, y_prev, l_prev); l table rows: (a, y_prev, l_prev)
    std::vector<double> y_table_, l_table_;
    std::vector<char> y_valid_, l_valid_;
    std::size_t y_row_index(int a, int a_prev, int l, int y_prev, int l_prev) const;
    std::size_t l_row_index(int a, int y_prev, int l_prev) const;
};

// How a numeric covariate evolves in generated data.
struct CovariateRule {
    enum class Kind {
        cyclic, // advances deterministically through its observed cycle of values
        ar      // linear autoregression on its value one period earlier
    };
    std::string name;
    Kind kind = Kind::ar;
    int period = 1; // steps between updates; the value is held in between
};

// Regressions with Gaussian residuals: the outcome on (A_k, A_{k-1}, Y_{k-1},
// covariates at k); each AR covariate on its own previous-period value.
class GaussianLinearModel : public ConditionalModel {
public:
    explicit GaussianLinearModel(std::vector<CovariateRule> rules = {});

    void fit(const Trajectory& traj) override;
    bool fitted() const override { return fitted_; }
    StepState initial_state(const Trajectory& traj) const override;
    StepState advance(const StepState& prev, int a, int a_prev, int k, Rng& rng) const override;
    std::unique_ptr<ConditionalModel> fresh() const override;

    std::span<const double> outcome_coefficients() const { return y_coef_; }
    double outcome_residual_sd() const { return y_sd_; }

private:
    std::vector<CovariateRule> rules_;
    bool fitted_ = false;
    // outcome regression: intercept, a, a_prev, y_prev, then covariate blocks
    std::vector<double> y_coef_;
    double y_sd_ = 0.0;
    // per-AR-covariate: intercept, slope, residual sd
    struct ArFit { double intercept = 0.0, slope = 0.0, sd = 0.0; };
    std::vector<ArFit> ar_fits_;
    // per-cyclic-covariate: successor value map (keys are observed values)
    std::vector<std::vector<std::pair<double, double>>> successor_;
    // cyclic covariates enter the outcome regression as level indicators
    std::vector<std::vector<double>> cyclic_levels_;
    std::vector<double> covariate_row(const std::vector<double>& cov) const;
    int outcome_dim() const;
};

// --- g-computation Monte Carlo ------------------------------------------------

struct GcompResult {
    std::vector<double> contrast; // per step 1..steps: mean(Y under always-1) - mean(Y under always-0)
    std::vector<double> mc_sd;    // per-step standard deviation of the rep-level differences
    int reps = 0;
};

// Repeatedly generates one trajectory under always-treat and one under
// never-treat from the fitted model, starting at `initial`, and averages the
// per-step outcome differences across reps.
GcompResult gcomputation_mc(const ConditionalModel& model, const StepState& initial, int steps,
                            int reps, std::uint64_t seed);

// One forced trajectory of `steps` draws starting after `initial`; the first
// generated step has absolute time index k_offset + 1 (used to keep periodic
// covariate updates aligned with the observed time axis).
std::vector<double> gcomputation_path(const ConditionalModel& model, const StepState& initial,
                                      const Regime& regime, int steps, int k_offset, Rng& rng);

// --- parametric bootstrap ----------------------------------------------------

struct BootstrapOptions {
    int replicates = 500;
    double level = 0.95;
    bool percentile = false;        // percentile intervals instead of normal approximation
    double max_failure_rate = 0.10; // abort above this share of failed replicates
};

struct BootstrapResult {
    std::vector<Estimate> per_k; // aligned with the inner estimator's series
    int failures = 0;
    int replicates = 0;
};

// Simulates replicate datasets from the fitted model under the observed
// treatment sequence (time 1 held at its observed state), reruns the inner
// estimator on each, and wraps the original point estimates with normal
// intervals using the across-replicate standard deviation.
BootstrapResult parametric_bootstrap(const ConditionalModel& fitted, const Trajectory& original,
                                     const std::function<std::vector<double>(const Trajectory&)>& inner,
                                     const BootstrapOptions& options, std::uint64_t seed);

// Replicate dataset generator used by the bootstrap (exposed for tests).
Trajectory simulate_replicate(const ConditionalModel& fitted, const Trajectory& original,
                              Rng& rng);

} // namespace nof1

#endif
