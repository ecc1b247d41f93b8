#include "nof1/scm.hpp"
#include "nof1/errors.hpp"
#include "nof1/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nof1 {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::basic: return "basic";
        case Variant::relaxed: return "relaxed";
        case Variant::time_trend: return "time_trend";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "basic") return Variant::basic;
    if (name == "relaxed") return Variant::relaxed;
    if (name == "time_trend") return Variant::time_trend;
    throw ValidationError("unknown model variant '" + name + "'");
}

// --- Regime ---------------------------------------------------------------

Regime Regime::natural(Schedule schedule) {
    Regime r;
    r.kind_ = Kind::natural;
    r.schedule_cells_ = schedule.cells();
    return r;
}

Regime Regime::always(int x) {
    if (x != 0 && x != 1) throw ValidationError("regime: always(x) needs x in {0,1}");
    Regime r;
    r.kind_ = Kind::always;
    r.always_x_ = x;
    return r;
}

Regime Regime::sequence(std::vector<int> a) {
    for (int v : a)
        if (v != 0 && v != 1) throw ValidationError("regime: sequence values must be 0/1");
    if (a.empty()) throw ValidationError("regime: empty sequence");
    Regime r;
    r.kind_ = Kind::sequence;
    r.explicit_a_ = std::move(a);
    return r;
}

int Regime::treatment_at(int k) const {
    if (k < 1) throw ValidationError("regime: k must be >= 1");
    switch (kind_) {
        case Kind::always: return always_x_;
        case Kind::natural: {
            const int q = static_cast<int>(schedule_cells_.size());
            return schedule_cells_[static_cast<std::size_t>((k - 1) % q)];
        }
        case Kind::sequence:
            if (k > static_cast<int>(explicit_a_.size()))
                throw ValidationError("regime: sequence shorter than requested horizon");
            return explicit_a_[static_cast<std::size_t>(k - 1)];
    }
    return 0;
}

int Regime::pre_study_treatment(int scm_default) const {
    return kind_ == Kind::always ? always_x_ : scm_default;
}

// --- NoiseRecord ------------------------------------------------------------

NoiseRecord make_noise_record(int t, std::uint64_t seed) {
    if (t < 1) throw ValidationError("noise record: t must be >= 1");
    NoiseRecord rec;
    rec.u_l.resize(static_cast<std::size_t>(t));
    rec.u_y.resize(static_cast<std::size_t>(t));
    Rng rng(seed);
    for (int k = 0; k < t; ++k) {
        rec.u_l[static_cast<std::size_t>(k)] = rng.uniform();
        rec.u_y[static_cast<std::size_t>(k)] = rng.uniform();
    }
    return rec;
}

// --- DiscreteScm ------------------------------------------------------------

std::size_t DiscreteScm::y_rows() const {
    const std::size_t u = static_cast<std::size_t>(nu());
    const std::size_t y = static_cast<std::size_t>(ny());
    const std::size_t l = static_cast<std::size_t>(nl());
    switch (variant) {
        case Variant::basic: return u * 2;
        case Variant::time_trend: return u * l * 2 * l;
        case Variant::relaxed: return u * l * 2 * y * l * 2;
    }
    return 0;
}

std::size_t DiscreteScm::l_rows() const {
    const std::size_t u = static_cast<std::size_t>(nu());
    const std::size_t y = static_cast<std::size_t>(ny());
    const std::size_t l = static_cast<std::size_t>(nl());
    switch (variant) {
        case Variant::basic: return 0;
        case Variant::time_trend: return u * l;
        case Variant::relaxed: return u * 2 * y * l;
    }
    return 0;
}

std::size_t DiscreteScm::y_row_index(int u, int l, int a, int y_prev, int l_prev,
                                     int a_prev) const {
    const std::size_t L = static_cast<std::size_t>(nl());
    const std::size_t Y = static_cast<std::size_t>(ny());
    switch (variant) {
        case Variant::basic:
            return static_cast<std::size_t>(u) * 2 + static_cast<std::size_t>(a);
        case Variant::time_trend:
            return ((static_cast<std::size_t>(u) * L + static_cast<std::size_t>(l)) * 2 +
                    static_cast<std::size_t>(a)) * L + static_cast<std::size_t>(l_prev);
        case Variant::relaxed:
            return ((((static_cast<std::size_t>(u) * L + static_cast<std::size_t>(l)) * 2 +
                      static_cast<std::size_t>(a)) * Y + static_cast<std::size_t>(y_prev)) * L +
                    static_cast<std::size_t>(l_prev)) * 2 + static_cast<std::size_t>(a_prev);
    }
    return 0;
}

std::size_t DiscreteScm::l_row_index(int u, int a, int y_prev, int l_prev) const {
    const std::size_t L = static_cast<std::size_t>(nl());
    const std::size_t Y = static_cast<std::size_t>(ny());
    switch (variant) {
        case Variant::time_trend:
            return static_cast<std::size_t>(u) * L + static_cast<std::size_t>(l_prev);
        case Variant::relaxed:
            return ((static_cast<std::size_t>(u) * 2 + static_cast<std::size_t>(a)) * Y +
                    static_cast<std::size_t>(y_prev)) * L + static_cast<std::size_t>(l_prev);
        case Variant::basic: break;
    }
    throw ValidationError("covariate kernel is absent for the basic variant");
}

std::span<const double> DiscreteScm::y_row(int u, int l, int a, int y_prev, int l_prev,
                                           int a_prev) const {
    const std::size_t row = y_row_index(u, l, a, y_prev, l_prev, a_prev);
    return {y_table.data() + row * static_cast<std::size_t>(ny()),
            static_cast<std::size_t>(ny())};
}

std::span<const double> DiscreteScm::l_row(int u, int a, int y_prev, int l_prev) const {
    const std::size_t row = l_row_index(u, a, y_prev, l_prev);
    return {l_table.data() + row * static_cast<std::size_t>(nl()),
            static_cast<std::size_t>(nl())};
}

void DiscreteScm::allocate_tables() {
    y_table.assign(y_rows() * static_cast<std::size_t>(ny()), 0.0);
    l_table.assign(l_rows() * static_cast<std::size_t>(nl()), 0.0);
}

void DiscreteScm::set_y_row(int u, int l, int a, int y_prev, int l_prev, int a_prev,
                            std::span<const double> probs) {
    if (static_cast<int>(probs.size()) != ny())
        throw ValidationError("set_y_row: wrong row length");
    const std::size_t base = y_row_index(u, l, a, y_prev, l_prev, a_prev) *
                             static_cast<std::size_t>(ny());
    std::copy(probs.begin(), probs.end(), y_table.begin() + static_cast<std::ptrdiff_t>(base));
}

void DiscreteScm::set_l_row(int u, int a, int y_prev, int l_prev,
                            std::span<const double> probs) {
    if (static_cast<int>(probs.size()) != nl())
        throw ValidationError("set_l_row: wrong row length");
    const std::size_t base = l_row_index(u, a, y_prev, l_prev) * static_cast<std::size_t>(nl());
    std::copy(probs.begin(), probs.end(), l_table.begin() + static_cast<std::ptrdiff_t>(base));
}

namespace {

void check_rows(const std::vector<double>& table, std::size_t rows, std::size_t width,
                bool positive, const char* name) {
    if (table.size() != rows * width)
        throw ValidationError(std::string(name) + ": table has wrong size");
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t j = 0; j < width; ++j) {
            const double p = table[r * width + j];
            if (p < 0.0)
                throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                                      ": negative probability");
            if (positive && p <= 0.0)
                throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                                      ": zero entry violates positivity");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                                  ": probabilities sum to " + std::to_string(sum));
    }
}

} // namespace

void DiscreteScm::validate() const {
    if (y_values.empty()) throw ValidationError("scm: empty outcome domain");
    if (u_weights.empty()) throw ValidationError("scm: empty baseline domain");
    if (variant != Variant::basic && l_values.empty())
        throw ValidationError("scm: " + variant_name(variant) +
                              " variant requires a covariate domain");
    double wsum = 0.0;
    for (double w : u_weights) {
        if (w < 0.0) throw ValidationError("scm: negative baseline weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw ValidationError("scm: baseline weights sum to " + std::to_string(wsum));
    if (!u_labels.empty() && u_labels.size() != u_weights.size())
        throw ValidationError("scm: baseline labels/weights length mismatch");
    if (initial_a != 0 && initial_a != 1)
        throw ValidationError("scm: initial treatment constant must be 0/1");
    if (initial_y < 0 || initial_y >= ny())
        throw ValidationError("scm: initial outcome level out of range");
    if (initial_l < 0 || initial_l >= nl())
        throw ValidationError("scm: initial covariate level out of range");
    check_rows(y_table, y_rows(), static_cast<std::size_t>(ny()), require_positivity,
               "scm.y_kernel");
    if (variant != Variant::basic)
        check_rows(l_table, l_rows(), static_cast<std::size_t>(nl()), require_positivity,
                   "scm.l_kernel");
}

// --- AdditiveScm ------------------------------------------------------------

void AdditiveScm::validate() const {
    if (noise_sd < 0.0) throw ValidationError("additive scm: noise_sd must be >= 0");
    if (noise_family == Noise::constant && noise_sd != 0.0)
        throw ValidationError("additive scm: constant noise forces noise_sd = 0");
}

double AdditiveScm::eval(int a, double noise_uniform) const {
    double eps = 0.0;
    switch (noise_family) {
        case Noise::gaussian:
            eps = noise_sd * stats::normal_quantile(std::clamp(noise_uniform, 1e-300, 1.0 - 1e-16));
            break;
        case Noise::uniform:
            // centered uniform scaled to the requested standard deviation
            eps = noise_sd * std::sqrt(3.0) * (2.0 * noise_uniform - 1.0);
            break;
        case Noise::constant:
            eps = 0.0;
            break;
    }
    return beta * static_cast<double>(a) + u_value + eps;
}

// --- simulation ---------------------------------------------------------------

namespace {

struct Draw {
    int y_level;
    int l_level;
};

Draw draw_step(const DiscreteScm& scm, int u, int a, int y_prev, int l_prev, int a_prev,
               double u_l, double u_y) {
    int l = scm.initial_l;
    if (scm.variant != Variant::basic)
        l = Rng::categorical_from_uniform(scm.l_row(u, a, y_prev, l_prev), u_l);
    const int y = Rng::categorical_from_uniform(scm.y_row(u, l, a, y_prev, l_prev, a_prev), u_y);
    return {y, l};
}

} // namespace

Trajectory simulate(const DiscreteScm& scm, int u, const Regime& regime,
                    const NoiseRecord& noise) {
    if (u < 0 || u >= scm.nu()) throw ValidationError("simulate: baseline level out of range");
    const int t = noise.length();
    if (regime.required_length() > 0 && regime.required_length() < t)
        throw ValidationError("simulate: explicit regime shorter than t");

    Trajectory traj;
    traj.t = t;
    traj.a.resize(static_cast<std::size_t>(t));
    traj.y.resize(static_cast<std::size_t>(t));
    traj.y_level.resize(static_cast<std::size_t>(t));
    traj.y_level_values = scm.y_values;
    if (scm.has_covariate()) {
        traj.l_level.resize(static_cast<std::size_t>(t));
        traj.n_l_levels = scm.nl();
    }
    if (!scm.u_labels.empty()) traj.u_label = scm.u_labels[static_cast<std::size_t>(u)];

    int y_prev = scm.initial_y;
    int l_prev = scm.initial_l;
    int a_prev = regime.pre_study_treatment(scm.initial_a);
    for (int k = 1; k <= t; ++k) {
        const int a = regime.treatment_at(k);
        const auto d = draw_step(scm, u, a, y_prev, l_prev, a_prev,
                                 noise.u_l[static_cast<std::size_t>(k - 1)],
                                 noise.u_y[static_cast<std::size_t>(k - 1)]);
        traj.a[static_cast<std::size_t>(k - 1)] = a;
        traj.y_level[static_cast<std::size_t>(k - 1)] = d.y_level;
        traj.y[static_cast<std::size_t>(k - 1)] = scm.y_values[static_cast<std::size_t>(d.y_level)];
        if (scm.has_covariate())
            traj.l_level[static_cast<std::size_t>(k - 1)] = d.l_level;
        y_prev = d.y_level;
        l_prev = d.l_level;
        a_prev = a;
    }
    if (scm.has_covariate()) {
        traj.covariate_names = {"l"};
        std::vector<double> col(static_cast<std::size_t>(t));
        for (int k = 0; k < t; ++k)
            col[static_cast<std::size_t>(k)] =
                scm.l_values[static_cast<std::size_t>(traj.l_level[static_cast<std::size_t>(k)])];
        traj.covariates = {std::move(col)};
    }
    return traj;
}

Trajectory simulate(const DiscreteScm& scm, int u, const Regime& regime, int t,
                    std::uint64_t seed) {
    return simulate(scm, u, regime, make_noise_record(t, seed));
}

Trajectory simulate(const AdditiveScm& scm, const Regime& regime, const NoiseRecord& noise) {
    scm.validate();
    const int t = noise.length();
    if (regime.required_length() > 0 && regime.required_length() < t)
        throw ValidationError("simulate: explicit regime shorter than t");
    Trajectory traj;
    traj.t = t;
    traj.a.resize(static_cast<std::size_t>(t));
    traj.y.resize(static_cast<std::size_t>(t));
    for (int k = 1; k <= t; ++k) {
        const int a = regime.treatment_at(k);
        traj.a[static_cast<std::size_t>(k - 1)] = a;
        traj.y[static_cast<std::size_t>(k - 1)] =
            scm.eval(a, noise.u_y[static_cast<std::size_t>(k - 1)]);
    }
    return traj;
}

Trajectory simulate(const AdditiveScm& scm, const Regime& regime, int t, std::uint64_t seed) {
    return simulate(scm, regime, make_noise_record(t, seed));
}

// --- exact ground truth --------------------------------------------------------

double exact_counterfactual_mean(const DiscreteScm& scm, int u, int k, const Regime& regime) {
    if (u < 0 || u >= scm.nu()) throw ValidationError("baseline level out of range");
    if (k < 1) throw ValidationError("k must be >= 1");
    const int NY = scm.ny(), NL = scm.nl();

    // state weights over the joint (y, l) level pair
    std::vector<double> w(static_cast<std::size_t>(NY * NL), 0.0);
    w[static_cast<std::size_t>(scm.initial_y * NL + scm.initial_l)] = 1.0;
    std::vector<double> next(w.size());

    int a_prev = regime.pre_study_treatment(scm.initial_a);
    for (int m = 1; m <= k; ++m) {
        const int a = regime.treatment_at(m);
        std::fill(next.begin(), next.end(), 0.0);
        for (int yp = 0; yp < NY; ++yp)
            for (int lp = 0; lp < NL; ++lp) {
                const double wp = w[static_cast<std::size_t>(yp * NL + lp)];
                if (wp == 0.0) continue;
                for (int l = 0; l < NL; ++l) {
                    const double pl =
                        scm.variant == Variant::basic
                            ? (l == scm.initial_l ? 1.0 : 0.0)
                            : scm.l_row(u, a, yp, lp)[static_cast<std::size_t>(l)];
                    if (pl == 0.0) continue;
                    const auto yr = scm.y_row(u, l, a, yp, lp, a_prev);
                    for (int y = 0; y < NY; ++y)
                        next[static_cast<std::size_t>(y * NL + l)] +=
                            wp * pl * yr[static_cast<std::size_t>(y)];
                }
            }
        w.swap(next);
        a_prev = a;
    }

    double out = 0.0;
    for (int y = 0; y < NY; ++y) {
        double marginal = 0.0;
        for (int l = 0; l < NL; ++l) marginal += w[static_cast<std::size_t>(y * NL + l)];
        out += scm.y_values[static_cast<std::size_t>(y)] * marginal;
    }
    return out;
}

double exact_counterfactual_mean(const DiscreteScm& scm, int u, int k, int x) {
    return exact_counterfactual_mean(scm, u, k, Regime::always(x));
}

double true_ucate(const DiscreteScm& scm, int u, int k) {
    return exact_counterfactual_mean(scm, u, k, 1) - exact_counterfactual_mean(scm, u, k, 0);
}

double true_ucate(const AdditiveScm& scm) { return scm.beta; }

double true_ace(const DiscreteScm& scm, int k) {
    double out = 0.0;
    for (int u = 0; u < scm.nu(); ++u)
        out += scm.u_weights[static_cast<std::size_t>(u)] * true_ucate(scm, u, k);
    return out;
}

double ice_given_noise(const DiscreteScm& scm, int u, const NoiseRecord& noise, int k) {
    if (k < 1 || k > noise.length())
        throw ValidationError("ice_given_noise: noise record does not cover time k");
    const auto treated = simulate(scm, u, Regime::always(1), noise);
    const auto control = simulate(scm, u, Regime::always(0), noise);
    return treated.y[static_cast<std::size_t>(k - 1)] - control.y[static_cast<std::size_t>(k - 1)];
}

double ice_given_noise(const AdditiveScm& scm, const NoiseRecord& noise, int k) {
    if (k < 1 || k > noise.length())
        throw ValidationError("ice_given_noise: noise record does not cover time k");
    const double u_y = noise.u_y[static_cast<std::size_t>(k - 1)];
    return scm.eval(1, u_y) - scm.eval(0, u_y);
}

// --- random model generator ------------------------------------------------------

namespace {

std::vector<double> random_row(int n, double min_prob, Rng& rng) {
    std::vector<double> row(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& p : row) {
        p = min_prob + rng.uniform();
        sum += p;
    }
    for (auto& p : row) p /= sum;
    return row;
}

} // namespace

DiscreteScm random_discrete_scm(Variant variant, int ny, int nl, int nu, double min_prob,
                                Rng& rng) {
    if (ny < 2 || nu < 1) throw ValidationError("random scm: need ny >= 2 and nu >= 1");
    if (variant != Variant::basic && nl < 1)
        throw ValidationError("random scm: need nl >= 1");
    DiscreteScm scm;
    scm.variant = variant;
    scm.y_values.resize(static_cast<std::size_t>(ny));
    for (int i = 0; i < ny; ++i) scm.y_values[static_cast<std::size_t>(i)] = i;
    if (variant != Variant::basic) {
        scm.l_values.resize(static_cast<std::size_t>(nl));
        for (int i = 0; i < nl; ++i) scm.l_values[static_cast<std::size_t>(i)] = i;
    }
    scm.u_weights = random_row(nu, 0.1, rng);
    scm.require_positivity = min_prob > 0.0;
    scm.allocate_tables();
    const std::size_t yw = static_cast<std::size_t>(ny);
    for (std::size_t r = 0; r < scm.y_rows(); ++r) {
        const auto row = random_row(ny, min_prob, rng);
        std::copy(row.begin(), row.end(),
                  scm.y_table.begin() + static_cast<std::ptrdiff_t>(r * yw));
    }
    const std::size_t lw = static_cast<std::size_t>(scm.nl());
    for (std::size_t r = 0; r < scm.l_rows(); ++r) {
        const auto row = random_row(scm.nl(), min_prob, rng);
        std::copy(row.begin(), row.end(),
                  scm.l_table.begin() + static_cast<std::ptrdiff_t>(r * lw));
    }
    scm.validate();
    return scm;
}

} // namespace nof1
