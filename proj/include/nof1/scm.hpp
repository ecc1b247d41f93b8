#ifndef NOF1_SCM_HPP
#define NOF1_SCM_HPP

#include "nof1/rng.hpp"
#include "nof1/schedule.hpp"
#include "nof1/trajectory.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nof1 {

// Which structural layers the model has:
//   basic      - Y_k depends on (A_k, U) only
//   relaxed    - L_k | (A_k, Y_{k-1}, L_{k-1}, U); Y_k | (L_k, A_k, Y_{k-1}, L_{k-1}, A_{k-1}, U)
//   time_trend - L_k | (L_{k-1}, U);               Y_k | (L_k, A_k, L_{k-1}, U)
enum class Variant { basic, relaxed, time_trend };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Treatment strategy used when generating or evaluating counterfactuals.
// For "always x" the forced history extends through the pre-study slot, so the
// lagged treatment seen at time 1 is x as well.
class Regime {
public:
    static Regime natural(Schedule schedule);
    static Regime always(int x);
    static Regime sequence(std::vector<int> a);

    int treatment_at(int k) const; // k >= 1
    int pre_study_treatment(int scm_default) const;
    int required_length() const { return explicit_a_.empty() ? 0 : static_cast<int>(explicit_a_.size()); }
    bool is_always() const { return kind_ == Kind::always; }
    int always_value() const { return always_x_; }

private:
    enum class Kind { natural, always, sequence };
    Kind kind_ = Kind::always;
    std::vector<int> schedule_cells_;
    std::vector<int> explicit_a_;
    int always_x_ = 0;
};

// Per-time exogenous draws as raw uniforms; the structural equations map them
// to covariate / outcome values by inverse transform. Sharing one record across
// two regimes evaluates both counterfactual worlds on the same noise.
struct NoiseRecord {
    std::vector<double> u_l;
    std::vector<double> u_y;
    int length() const { return static_cast<int>(u_y.size()); }
};

NoiseRecord make_noise_record(int t, std::uint64_t seed);

// Tabular structural causal model over finite outcome / covariate / baseline
// domains. One kernel table per layer serves every time point.
class DiscreteScm {
public:
    Variant variant = Variant::basic;
    std::vector<double> y_values;       // numeric label per outcome level
    std::vector<double> l_values;       // numeric label per covariate level (may be empty)
    std::vector<double> u_weights;      // baseline distribution, sums to 1
    std::vector<std::string> u_labels;  // optional names, defaulted to "u0", "u1", ...
    int initial_a = 0;                  // fixed pre-study constants
    int initial_y = 0;
    int initial_l = 0;
    bool require_positivity = false;

    // row-major probability tables; see row index helpers below for layout
    std::vector<double> y_table;
    std::vector<double> l_table;

    int ny() const { return static_cast<int>(y_values.size()); }
    int nl() const { return l_values.empty() ? 1 : static_cast<int>(l_values.size()); }
    int nu() const { return static_cast<int>(u_weights.size()); }
    bool has_covariate() const { return !l_values.empty() && variant != Variant::basic; }

    // conditional row P(Y_k = . | ...); irrelevant parents are ignored per variant
    std::span<const double> y_row(int u, int l, int a, int y_prev, int l_prev, int a_prev) const;
    // conditional row P(L_k = . | ...); only defined for relaxed / time_trend
    std::span<const double> l_row(int u, int a, int y_prev, int l_prev) const;

    std::size_t y_rows() const;
    std::size_t l_rows() const;

    void validate() const; // throws ValidationError naming the first broken invariant

    // builder helpers (fill one conditional row)
    void set_y_row(int u, int l, int a, int y_prev, int l_prev, int a_prev,
                   std::span<const double> probs);
    void set_l_row(int u, int a, int y_prev, int l_prev, std::span<const double> probs);
    void allocate_tables();

private:
    std::size_t y_row_index(int u, int l, int a, int y_prev, int l_prev, int a_prev) const;
    std::size_t l_row_index(int u, int a, int y_prev, int l_prev) const;
};

// Additive-noise instance of the basic model: Y_k = beta * A_k + u + eps_k.
struct AdditiveScm {
    enum class Noise { gaussian, uniform, constant };
    double beta = 0.0;
    double u_value = 0.0;
    double noise_sd = 0.0;
    Noise noise_family = Noise::gaussian;

    void validate() const;
    double eval(int a, double noise_uniform) const; // inverse-transform of one draw
};

// --- simulation ---------------------------------------------------------

Trajectory simulate(const DiscreteScm& scm, int u, const Regime& regime,
                    const NoiseRecord& noise);
Trajectory simulate(const DiscreteScm& scm, int u, const Regime& regime, int t,
                    std::uint64_t seed);
Trajectory simulate(const AdditiveScm& scm, const Regime& regime, const NoiseRecord& noise);
Trajectory simulate(const AdditiveScm& scm, const Regime& regime, int t, std::uint64_t seed);

// --- exact ground truth --------------------------------------------------

// E(Y_k | U = u) under a forced treatment regime, by forward propagation of the
// joint (Y, L) state distribution. O(k * |Y|^2 * |L|^2).
double exact_counterfactual_mean(const DiscreteScm& scm, int u, int k, const Regime& regime);
// always-x strategy
double exact_counterfactual_mean(const DiscreteScm& scm, int u, int k, int x);

double true_ucate(const DiscreteScm& scm, int u, int k);
double true_ucate(const AdditiveScm& scm);
double true_ace(const DiscreteScm& scm, int k);

// Outcome contrast at time k between the always-treated and never-treated
// worlds evaluated on one shared noise record. Only available inside the
// simulator: both counterfactuals are never observable together.
double ice_given_noise(const DiscreteScm& scm, int u, const NoiseRecord& noise, int k);
double ice_given_noise(const AdditiveScm& scm, const NoiseRecord& noise, int k);

// --- model generators (verification harness) -----------------------------

// Random strictly-positive model with entries bounded away from zero.
DiscreteScm random_discrete_scm(Variant variant, int ny, int nl, int nu, double min_prob,
                                Rng& rng);

} // namespace nof1

#endif
