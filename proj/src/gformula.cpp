#include "nof1/gformula.hpp"
#include "nof1/errors.hpp"
#include "nof1/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nof1 {

// --- index sets -------------------------------------------------------------

IndexSets index_sets(std::span<const int> a, int first_k) {
    if (first_k < 1) throw ValidationError("index_sets: first_k must be >= 1");
    IndexSets sets;
    const int t = static_cast<int>(a.size());
    for (int k = std::max(first_k, 2); k <= t; ++k) {
        const int ak = a[static_cast<std::size_t>(k - 1)];
        sets.single[ak].push_back(k);
        if (a[static_cast<std::size_t>(k - 2)] == ak) sets.doubled[ak].push_back(k);
    }
    return sets;
}

IndexSets index_sets(const Trajectory& traj, int first_k) {
    return index_sets(std::span<const int>(traj.a), first_k);
}

// --- level coding -------------------------------------------------------------

namespace {

int code_value(std::vector<double>& levels, double v) {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == v) return static_cast<int>(i);
    levels.push_back(v);
    return static_cast<int>(levels.size()) - 1;
}

} // namespace

Trajectory code_levels(const Trajectory& traj, const std::string& covariate) {
    Trajectory out = traj;
    if (out.y_level.empty()) {
        out.y_level_values.clear();
        out.y_level.resize(out.y.size());
        for (std::size_t k = 0; k < out.y.size(); ++k)
            out.y_level[k] = code_value(out.y_level_values, out.y[k]);
    }
    if (!covariate.empty()) {
        const auto it = std::find(out.covariate_names.begin(), out.covariate_names.end(),
                                  covariate);
        if (it == out.covariate_names.end())
            throw ValidationError("code_levels: no covariate column named '" + covariate + "'");
        const auto& col = out.covariates[static_cast<std::size_t>(
            std::distance(out.covariate_names.begin(), it))];
        std::vector<double> levels;
        out.l_level.resize(col.size());
        for (std::size_t k = 0; k < col.size(); ++k)
            out.l_level[k] = code_value(levels, col[k]);
        out.n_l_levels = static_cast<int>(levels.size());
    } else if (out.l_level.empty()) {
        out.l_level.assign(out.y.size(), 0);
        out.n_l_levels = 1;
    }
    return out;
}

// --- GKernels ------------------------------------------------------------------

void GKernels::allocate() {
    for (int x = 0; x <= 1; ++x) {
        gy[x].assign(gy_rows() * static_cast<std::size_t>(ny), 0.0);
        gy_counts[x].assign(gy_rows(), 0.0);
        gy_valid[x].assign(gy_rows(), 0);
        gl[x].assign(gl_rows() * static_cast<std::size_t>(nl), 0.0);
        gl_counts[x].assign(gl_rows(), 0.0);
        gl_valid[x].assign(gl_rows(), 0);
    }
}

std::span<const double> GKernels::gy_row(int x, int l, int y_prev, int l_prev) const {
    const std::size_t row = gy_row_index(l, y_prev, l_prev);
    return {gy[x].data() + row * static_cast<std::size_t>(ny), static_cast<std::size_t>(ny)};
}

std::span<const double> GKernels::gl_row(int x, int y_prev, int l_prev) const {
    const std::size_t row = gl_row_index(y_prev, l_prev);
    return {gl[x].data() + row * static_cast<std::size_t>(nl), static_cast<std::size_t>(nl)};
}

bool GKernels::gy_row_valid(int x, int l, int y_prev, int l_prev) const {
    return gy_valid[x][gy_row_index(l, y_prev, l_prev)] != 0;
}

bool GKernels::gl_row_valid(int x, int y_prev, int l_prev) const {
    return gl_valid[x][gl_row_index(y_prev, l_prev)] != 0;
}

GKernels fit_kernels(const Trajectory& traj, double kappa, int first_k) {
    if (kappa < 0.0) throw ValidationError("fit_kernels: smoothing must be >= 0");
    if (traj.y_level.empty())
        throw ValidationError("fit_kernels: trajectory has no discrete outcome coding");
    const bool has_l = !traj.l_level.empty() && traj.n_l_levels > 0;

    GKernels kernels;
    kernels.ny = static_cast<int>(traj.y_level_values.size());
    kernels.nl = has_l ? traj.n_l_levels : 1;
    kernels.y_values = traj.y_level_values;
    kernels.kappa = kappa;
    kernels.allocate();

    const auto sets = index_sets(traj, first_k);
    for (int x = 0; x <= 1; ++x) {
        if (sets.doubled[x].empty())
            throw EstimationError(
                "fit_kernels: no time point with treatment " + std::to_string(x) +
                " assigned twice in a row; the outcome kernel for this pattern is not estimable");
        if (sets.single[x].empty())
            throw EstimationError("fit_kernels: no time point with treatment " +
                                  std::to_string(x));
    }

    auto level_l = [&](int k) { return has_l ? traj.l_level[static_cast<std::size_t>(k - 1)] : 0; };

    // raw counts
    for (int x = 0; x <= 1; ++x) {
        for (int k : sets.doubled[x]) {
            const std::size_t row = kernels.gy_row_index(
                level_l(k), traj.y_level[static_cast<std::size_t>(k - 2)], level_l(k - 1));
            kernels.gy[x][row * static_cast<std::size_t>(kernels.ny) +
                          static_cast<std::size_t>(traj.y_level[static_cast<std::size_t>(k - 1)])] += 1.0;
            kernels.gy_counts[x][row] += 1.0;
        }
        for (int k : sets.single[x]) {
            const std::size_t row = kernels.gl_row_index(
                traj.y_level[static_cast<std::size_t>(k - 2)], level_l(k - 1));
            kernels.gl[x][row * static_cast<std::size_t>(kernels.nl) +
                          static_cast<std::size_t>(level_l(k))] += 1.0;
            kernels.gl_counts[x][row] += 1.0;
        }
    }

    // normalize with optional Laplace smoothing; unobserved rows stay flagged
    // invalid at kappa = 0 instead of being imputed
    for (int x = 0; x <= 1; ++x) {
        for (std::size_t r = 0; r < kernels.gy_rows(); ++r) {
            const double total = kernels.gy_counts[x][r];
            if (total == 0.0 && kappa == 0.0) continue;
            for (int y = 0; y < kernels.ny; ++y) {
                auto& cell = kernels.gy[x][r * static_cast<std::size_t>(kernels.ny) +
                                           static_cast<std::size_t>(y)];
                cell = (cell + kappa) / (total + kappa * kernels.ny);
            }
            kernels.gy_valid[x][r] = 1;
        }
        for (std::size_t r = 0; r < kernels.gl_rows(); ++r) {
            const double total = kernels.gl_counts[x][r];
            if (total == 0.0 && kappa == 0.0) continue;
            for (int l = 0; l < kernels.nl; ++l) {
                auto& cell = kernels.gl[x][r * static_cast<std::size_t>(kernels.nl) +
                                           static_cast<std::size_t>(l)];
                cell = (cell + kappa) / (total + kappa * kernels.nl);
            }
            kernels.gl_valid[x][r] = 1;
        }
    }
    return kernels;
}

GKernels kernels_from_scm(const DiscreteScm& scm, int u) {
    GKernels kernels;
    kernels.ny = scm.ny();
    kernels.nl = scm.nl();
    kernels.y_values = scm.y_values;
    kernels.allocate();
    for (int x = 0; x <= 1; ++x) {
        for (int l = 0; l < kernels.nl; ++l)
            for (int yp = 0; yp < kernels.ny; ++yp)
                for (int lp = 0; lp < kernels.nl; ++lp) {
                    const auto row = scm.y_row(u, l, x, yp, lp, x);
                    const std::size_t r = kernels.gy_row_index(l, yp, lp);
                    std::copy(row.begin(), row.end(),
                              kernels.gy[x].begin() +
                                  static_cast<std::ptrdiff_t>(r * static_cast<std::size_t>(kernels.ny)));
                    kernels.gy_valid[x][r] = 1;
                }
        for (int yp = 0; yp < kernels.ny; ++yp)
            for (int lp = 0; lp < kernels.nl; ++lp) {
                const std::size_t r = kernels.gl_row_index(yp, lp);
                if (scm.variant == Variant::basic) {
                    kernels.gl[x][r * static_cast<std::size_t>(kernels.nl)] = 1.0;
                } else {
                    const auto row = scm.l_row(u, x, yp, lp);
                    std::copy(row.begin(), row.end(),
                              kernels.gl[x].begin() +
                                  static_cast<std::ptrdiff_t>(r * static_cast<std::size_t>(kernels.nl)));
                }
                kernels.gl_valid[x][r] = 1;
            }
    }
    return kernels;
}

// --- theta by forward propagation ----------------------------------------------

namespace {

std::vector<double> theta_forward(const GKernels& kernels, int k_max, int x, int y0, int l0,
                                  bool want_series) {
    if (k_max < 1) throw ValidationError("theta_dp: k must be >= 1");
    if (x != 0 && x != 1) throw ValidationError("theta_dp: x must be 0/1");
    if (y0 < 0 || y0 >= kernels.ny || l0 < 0 || l0 >= kernels.nl)
        throw ValidationError("theta_dp: initial state out of range");

    const int NY = kernels.ny, NL = kernels.nl;
    std::vector<double> w(static_cast<std::size_t>(NY * NL), 0.0);
    w[static_cast<std::size_t>(y0 * NL + l0)] = 1.0;
    std::vector<double> next(w.size());
    std::vector<double> series;
    if (want_series) series.reserve(static_cast<std::size_t>(k_max));

    for (int m = 1; m <= k_max; ++m) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int yp = 0; yp < NY; ++yp)
            for (int lp = 0; lp < NL; ++lp) {
                const double wp = w[static_cast<std::size_t>(yp * NL + lp)];
                if (wp == 0.0) continue;
                if (!kernels.gl_row_valid(x, yp, lp))
                    throw EstimationError("theta_dp: covariate kernel row (x=" +
                                          std::to_string(x) + ", y_prev=" + std::to_string(yp) +
                                          ", l_prev=" + std::to_string(lp) +
                                          ") was never observed");
                const auto lrow = kernels.gl_row(x, yp, lp);
                for (int l = 0; l < NL; ++l) {
                    const double pl = lrow[static_cast<std::size_t>(l)];
                    if (pl == 0.0) continue;
                    if (!kernels.gy_row_valid(x, l, yp, lp))
                        throw EstimationError(
                            "theta_dp: outcome kernel row (x=" + std::to_string(x) +
                            ", l=" + std::to_string(l) + ", y_prev=" + std::to_string(yp) +
                            ", l_prev=" + std::to_string(lp) + ") was never observed");
                    const auto yrow = kernels.gy_row(x, l, yp, lp);
                    for (int y = 0; y < NY; ++y)
                        next[static_cast<std::size_t>(y * NL + l)] +=
                            wp * pl * yrow[static_cast<std::size_t>(y)];
                }
            }
        w.swap(next);
        const double mass = stats::compensated_sum(w);
        if (std::abs(mass - 1.0) > 1e-9)
            throw EstimationError("theta_dp: state weights drifted from 1 (" +
                                  std::to_string(mass) + ") at step " + std::to_string(m));
        if (want_series || m == k_max) {
            double mu = 0.0;
            for (int y = 0; y < NY; ++y) {
                double marginal = 0.0;
                for (int l = 0; l < NL; ++l)
                    marginal += w[static_cast<std::size_t>(y * NL + l)];
                mu += kernels.y_values[static_cast<std::size_t>(y)] * marginal;
            }
            if (want_series) series.push_back(mu);
            else if (m == k_max) return {mu};
        }
    }
    return series;
}

} // namespace

double theta_dp(const GKernels& kernels, int k, int x, int y0, int l0) {
    return theta_forward(kernels, k, x, y0, l0, false).front();
}

std::vector<double> theta_dp_series(const GKernels& kernels, int k_max, int x, int y0, int l0) {
    return theta_forward(kernels, k_max, x, y0, l0, true);
}

double ucate_hat_gformula(const GKernels& kernels, int k, int y0, int l0) {
    return theta_dp(kernels, k, 1, y0, l0) - theta_dp(kernels, k, 0, y0, l0);
}

std::vector<double> ucate_hat_gformula_series(const GKernels& kernels, int k_max, int y0, int l0) {
    auto treated = theta_dp_series(kernels, k_max, 1, y0, l0);
    const auto control = theta_dp_series(kernels, k_max, 0, y0, l0);
    for (std::size_t i = 0; i < treated.size(); ++i) treated[i] -= control[i];
    return treated;
}

// --- CategoricalModel ------------------------------------------------------------

std::size_t CategoricalModel::y_row_index(int a, int a_prev, int l, int y_prev, int l_prev) const {
    return ((((static_cast<std::size_t>(a) * 2 + static_cast<std::size_t>(a_prev)) *
                  static_cast<std::size_t>(nl_) + static_cast<std::size_t>(l)) *
                 static_cast<std::size_t>(ny_) + static_cast<std::size_t>(y_prev)) *
            static_cast<std::size_t>(nl_)) + static_cast<std::size_t>(l_prev);
}

std::size_t CategoricalModel::l_row_index(int a, int y_prev, int l_prev) const {
    return (static_cast<std::size_t>(a) * static_cast<std::size_t>(ny_) +
            static_cast<std::size_t>(y_prev)) * static_cast<std::size_t>(nl_) +
           static_cast<std::size_t>(l_prev);
}

std::unique_ptr<CategoricalModel> CategoricalModel::from_scm(const DiscreteScm& scm, int u) {
    auto model = std::make_unique<CategoricalModel>(0.0);
    model->ny_ = scm.ny();
    model->nl_ = scm.nl();
    model->y_values_ = scm.y_values;
    model->l_values_ = scm.l_values.empty() ? std::vector<double>{0.0} : scm.l_values;
    const std::size_t yrows = 4 * static_cast<std::size_t>(model->nl_) *
                              static_cast<std::size_t>(model->ny_) *
                              static_cast<std::size_t>(model->nl_);
    const std::size_t lrows = 2 * static_cast<std::size_t>(model->ny_) *
                              static_cast<std::size_t>(model->nl_);
    model->y_table_.assign(yrows * static_cast<std::size_t>(model->ny_), 0.0);
    model->y_valid_.assign(yrows, 1);
    model->l_table_.assign(lrows * static_cast<std::size_t>(model->nl_), 0.0);
    model->l_valid_.assign(lrows, 1);
    for (int a = 0; a <= 1; ++a)
        for (int ap = 0; ap <= 1; ++ap)
            for (int l = 0; l < model->nl_; ++l)
                for (int yp = 0; yp < model->ny_; ++yp)
                    for (int lp = 0; lp < model->nl_; ++lp) {
                        const auto row = scm.y_row(u, l, a, yp, lp, ap);
                        const std::size_t base =
                            model->y_row_index(a, ap, l, yp, lp) *
                            static_cast<std::size_t>(model->ny_);
                        std::copy(row.begin(), row.end(),
                                  model->y_table_.begin() + static_cast<std::ptrdiff_t>(base));
                    }
    for (int a = 0; a <= 1; ++a)
        for (int yp = 0; yp < model->ny_; ++yp)
            for (int lp = 0; lp < model->nl_; ++lp) {
                const std::size_t base = model->l_row_index(a, yp, lp) *
                                         static_cast<std::size_t>(model->nl_);
                if (scm.variant == Variant::basic) {
                    model->l_table_[base] = 1.0;
                } else {
                    const auto row = scm.l_row(u, a, yp, lp);
                    std::copy(row.begin(), row.end(),
                              model->l_table_.begin() + static_cast<std::ptrdiff_t>(base));
                }
            }
    model->fitted_ = true;
    return model;
}

void CategoricalModel::fit(const Trajectory& traj) {
    if (traj.y_level.empty())
        throw ValidationError("categorical model: trajectory has no discrete outcome coding");
    const bool has_l = !traj.l_level.empty() && traj.n_l_levels > 0;
    ny_ = static_cast<int>(traj.y_level_values.size());
    nl_ = has_l ? traj.n_l_levels : 1;
    y_values_ = traj.y_level_values;
    l_values_.assign(static_cast<std::size_t>(nl_), 0.0);
    for (int i = 0; i < nl_; ++i) l_values_[static_cast<std::size_t>(i)] = i;

    const std::size_t yrows = 4 * static_cast<std::size_t>(nl_) * static_cast<std::size_t>(ny_) *
                              static_cast<std::size_t>(nl_);
    const std::size_t lrows = 2 * static_cast<std::size_t>(ny_) * static_cast<std::size_t>(nl_);
    y_table_.assign(yrows * static_cast<std::size_t>(ny_), 0.0);
    l_table_.assign(lrows * static_cast<std::size_t>(nl_), 0.0);
    std::vector<double> y_tot(yrows, 0.0), l_tot(lrows, 0.0);

    auto level_l = [&](int k) { return has_l ? traj.l_level[static_cast<std::size_t>(k - 1)] : 0; };
    for (int k = 2; k <= traj.t; ++k) {
        const int a = traj.a[static_cast<std::size_t>(k - 1)];
        const int ap = traj.a[static_cast<std::size_t>(k - 2)];
        const int yp = traj.y_level[static_cast<std::size_t>(k - 2)];
        const int lp = level_l(k - 1);
        const std::size_t yr = y_row_index(a, ap, level_l(k), yp, lp);
        y_table_[yr * static_cast<std::size_t>(ny_) +
                 static_cast<std::size_t>(traj.y_level[static_cast<std::size_t>(k - 1)])] += 1.0;
        y_tot[yr] += 1.0;
        const std::size_t lr = l_row_index(a, yp, lp);
        l_table_[lr * static_cast<std::size_t>(nl_) + static_cast<std::size_t>(level_l(k))] += 1.0;
        l_tot[lr] += 1.0;
    }

    y_valid_.assign(yrows, 0);
    l_valid_.assign(lrows, 0);
    for (std::size_t r = 0; r < yrows; ++r) {
        if (y_tot[r] == 0.0 && kappa_ == 0.0) continue;
        for (int y = 0; y < ny_; ++y) {
            auto& cell = y_table_[r * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(y)];
            cell = (cell + kappa_) / (y_tot[r] + kappa_ * ny_);
        }
        y_valid_[r] = 1;
    }
    for (std::size_t r = 0; r < lrows; ++r) {
        if (l_tot[r] == 0.0 && kappa_ == 0.0) continue;
        for (int l = 0; l < nl_; ++l) {
            auto& cell = l_table_[r * static_cast<std::size_t>(nl_) + static_cast<std::size_t>(l)];
            cell = (cell + kappa_) / (l_tot[r] + kappa_ * nl_);
        }
        l_valid_[r] = 1;
    }
    fitted_ = true;
}

StepState CategoricalModel::initial_state(const Trajectory& traj) const {
    if (traj.y_level.empty())
        throw ValidationError("categorical model: trajectory has no discrete outcome coding");
    StepState s;
    s.y = traj.y.front();
    s.y_level = traj.y_level.front();
    s.l_level = traj.l_level.empty() ? 0 : traj.l_level.front();
    return s;
}

StepState CategoricalModel::advance(const StepState& prev, int a, int a_prev, int /*k*/,
                                    Rng& rng) const {
    if (!fitted_) throw EstimationError("categorical model: not fitted");
    const std::size_t lr = l_row_index(a, prev.y_level, prev.l_level);
    if (!l_valid_[lr])
        throw EstimationError("categorical model: covariate stratum (a=" + std::to_string(a) +
                              ", y_prev=" + std::to_string(prev.y_level) +
                              ", l_prev=" + std::to_string(prev.l_level) + ") was never observed");
    const int l = rng.categorical({l_table_.data() + lr * static_cast<std::size_t>(nl_),
                                   static_cast<std::size_t>(nl_)});
    const std::size_t yr = y_row_index(a, a_prev, l, prev.y_level, prev.l_level);
    if (!y_valid_[yr])
        throw EstimationError("categorical model: outcome stratum (a=" + std::to_string(a) +
                              ", a_prev=" + std::to_string(a_prev) + ", l=" + std::to_string(l) +
                              ", y_prev=" + std::to_string(prev.y_level) +
                              ", l_prev=" + std::to_string(prev.l_level) + ") was never observed");
    const int y = rng.categorical({y_table_.data() + yr * static_cast<std::size_t>(ny_),
                                   static_cast<std::size_t>(ny_)});
    StepState s;
    s.y_level = y;
    s.y = y_values_[static_cast<std::size_t>(y)];
    s.l_level = l;
    return s;
}

std::unique_ptr<ConditionalModel> CategoricalModel::fresh() const {
    return std::make_unique<CategoricalModel>(kappa_);
}

GKernels CategoricalModel::constant_pattern_kernels() const {
    if (!fitted_) throw EstimationError("categorical model: not fitted");
    GKernels kernels;
    kernels.ny = ny_;
    kernels.nl = nl_;
    kernels.y_values = y_values_;
    kernels.kappa = kappa_;
    kernels.allocate();
    for (int x = 0; x <= 1; ++x) {
        for (int l = 0; l < nl_; ++l)
            for (int yp = 0; yp < ny_; ++yp)
                for (int lp = 0; lp < nl_; ++lp) {
                    const std::size_t src = y_row_index(x, x, l, yp, lp);
                    const std::size_t dst = kernels.gy_row_index(l, yp, lp);
                    if (!y_valid_[src]) continue;
                    std::copy(y_table_.begin() +
                                  static_cast<std::ptrdiff_t>(src * static_cast<std::size_t>(ny_)),
                              y_table_.begin() +
                                  static_cast<std::ptrdiff_t>((src + 1) * static_cast<std::size_t>(ny_)),
                              kernels.gy[x].begin() +
                                  static_cast<std::ptrdiff_t>(dst * static_cast<std::size_t>(ny_)));
                    kernels.gy_valid[x][dst] = 1;
                }
        for (int yp = 0; yp < ny_; ++yp)
            for (int lp = 0; lp < nl_; ++lp) {
                const std::size_t src = l_row_index(x, yp, lp);
                const std::size_t dst = kernels.gl_row_index(yp, lp);
                if (!l_valid_[src]) continue;
                std::copy(l_table_.begin() +
                              static_cast<std::ptrdiff_t>(src * static_cast<std::size_t>(nl_)),
                          l_table_.begin() +
                              static_cast<std::ptrdiff_t>((src + 1) * static_cast<std::size_t>(nl_)),
                          kernels.gl[x].begin() +
                              static_cast<std::ptrdiff_t>(dst * static_cast<std::size_t>(nl_)));
                kernels.gl_valid[x][dst] = 1;
            }
    }
    return kernels;
}

// --- GaussianLinearModel -----------------------------------------------------------

namespace {

// ordinary least squares via normal equations with partial pivoting
std::pair<std::vector<double>, double> ols_fit(const std::vector<std::vector<double>>& rows,
                                               const std::vector<double>& target) {
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();
    if (n <= p) throw EstimationError("linear model: more parameters than observations");
    std::vector<std::vector<double>> m(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) m[r][c] += rows[i][r] * rows[i][c];
            m[r][p] += rows[i][r] * target[i];
        }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12)
            throw EstimationError("linear model: singular design matrix");
        std::swap(m[col], m[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c <= p; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::vector<double> coef(p);
    for (std::size_t r = 0; r < p; ++r) coef[r] = m[r][p] / m[r][r];
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t c = 0; c < p; ++c) fit += coef[c] * rows[i][c];
        const double res = target[i] - fit;
        rss += res * res;
    }
    const double sd = std::sqrt(std::max(0.0, rss / static_cast<double>(n - p)));
    return {coef, sd};
}

} // namespace

GaussianLinearModel::GaussianLinearModel(std::vector<CovariateRule> rules)
    : rules_(std::move(rules)) {}

std::vector<double> GaussianLinearModel::covariate_row(const std::vector<double>& cov) const {
    std::vector<double> out;
    for (std::size_t c = 0; c < rules_.size(); ++c) {
        if (rules_[c].kind == CovariateRule::Kind::ar) {
            out.push_back(cov[c]);
        } else {
            const auto& levels = cyclic_levels_[c];
            for (std::size_t lv = 1; lv < levels.size(); ++lv)
                out.push_back(cov[c] == levels[lv] ? 1.0 : 0.0);
        }
    }
    return out;
}

int GaussianLinearModel::outcome_dim() const {
    int dim = 4; // intercept, a, a_prev, y_prev
    for (std::size_t c = 0; c < rules_.size(); ++c)
        dim += rules_[c].kind == CovariateRule::Kind::ar
                   ? 1
                   : static_cast<int>(cyclic_levels_[c].size()) - 1;
    return dim;
}

void GaussianLinearModel::fit(const Trajectory& traj) {
    // match declared rules to trajectory columns
    std::vector<std::size_t> column(rules_.size());
    for (std::size_t c = 0; c < rules_.size(); ++c) {
        const auto it = std::find(traj.covariate_names.begin(), traj.covariate_names.end(),
                                  rules_[c].name);
        if (it == traj.covariate_names.end())
            throw ValidationError("linear model: no covariate column named '" +
                                  rules_[c].name + "'");
        column[c] = static_cast<std::size_t>(std::distance(traj.covariate_names.begin(), it));
    }

    ar_fits_.assign(rules_.size(), {});
    successor_.assign(rules_.size(), {});
    cyclic_levels_.assign(rules_.size(), {});
    for (std::size_t c = 0; c < rules_.size(); ++c) {
        const auto& col = traj.covariates[column[c]];
        if (rules_[c].kind == CovariateRule::Kind::cyclic) {
            for (double v : col) {
                if (std::find(cyclic_levels_[c].begin(), cyclic_levels_[c].end(), v) ==
                    cyclic_levels_[c].end())
                    cyclic_levels_[c].push_back(v);
            }
            for (std::size_t k = 0; k + 1 < col.size(); ++k) {
                bool found = false;
                for (auto& [from, to] : successor_[c])
                    if (from == col[k]) {
                        if (to != col[k + 1])
                            throw ValidationError(
                                "linear model: covariate '" + rules_[c].name +
                                "' is declared deterministic but its successor is ambiguous");
                        found = true;
                    }
                if (!found) successor_[c].emplace_back(col[k], col[k + 1]);
            }
        } else {
            const int period = std::max(1, rules_[c].period);
            std::vector<std::vector<double>> rows;
            std::vector<double> target;
            for (int k = 1 + period; k <= traj.t; ++k) {
                if ((k - 1) % period != 0) continue; // fit on update steps only
                rows.push_back({1.0, col[static_cast<std::size_t>(k - 1 - period)]});
                target.push_back(col[static_cast<std::size_t>(k - 1)]);
            }
            if (rows.size() < 3)
                throw EstimationError("linear model: too few update steps for covariate '" +
                                      rules_[c].name + "'");
            const auto [coef, sd] = ols_fit(rows, target);
            ar_fits_[c] = {coef[0], coef[1], sd};
        }
    }

    // outcome regression on k = 2..t
    std::vector<std::vector<double>> rows;
    std::vector<double> target;
    for (int k = 2; k <= traj.t; ++k) {
        std::vector<double> cov(rules_.size());
        for (std::size_t c = 0; c < rules_.size(); ++c)
            cov[c] = traj.covariates[column[c]][static_cast<std::size_t>(k - 1)];
        std::vector<double> row{1.0, static_cast<double>(traj.a[static_cast<std::size_t>(k - 1)]),
                                static_cast<double>(traj.a[static_cast<std::size_t>(k - 2)]),
                                traj.y[static_cast<std::size_t>(k - 2)]};
        const auto cr = covariate_row(cov);
        row.insert(row.end(), cr.begin(), cr.end());
        rows.push_back(std::move(row));
        target.push_back(traj.y[static_cast<std::size_t>(k - 1)]);
    }
    const auto [coef, sd] = ols_fit(rows, target);
    y_coef_ = coef;
    y_sd_ = sd;
    fitted_ = true;
}

StepState GaussianLinearModel::initial_state(const Trajectory& traj) const {
    StepState s;
    s.y = traj.y.front();
    s.cov.resize(rules_.size());
    for (std::size_t c = 0; c < rules_.size(); ++c) {
        const auto it = std::find(traj.covariate_names.begin(), traj.covariate_names.end(),
                                  rules_[c].name);
        if (it == traj.covariate_names.end())
            throw ValidationError("linear model: no covariate column named '" +
                                  rules_[c].name + "'");
        s.cov[c] = traj.covariates[static_cast<std::size_t>(
            std::distance(traj.covariate_names.begin(), it))].front();
    }
    return s;
}

StepState GaussianLinearModel::advance(const StepState& prev, int a, int a_prev, int k,
                                       Rng& rng) const {
    if (!fitted_) throw EstimationError("linear model: not fitted");
    StepState s;
    s.cov.resize(rules_.size());
    for (std::size_t c = 0; c < rules_.size(); ++c) {
        if (rules_[c].kind == CovariateRule::Kind::cyclic) {
            bool found = false;
            for (const auto& [from, to] : successor_[c])
                if (from == prev.cov[c]) {
                    s.cov[c] = to;
                    found = true;
                    break;
                }
            if (!found)
                throw EstimationError("linear model: no successor recorded for covariate '" +
                                      rules_[c].name + "' value " + std::to_string(prev.cov[c]));
        } else {
            const int period = std::max(1, rules_[c].period);
            if ((k - 1) % period == 0)
                s.cov[c] = ar_fits_[c].intercept + ar_fits_[c].slope * prev.cov[c] +
                           rng.normal(0.0, ar_fits_[c].sd);
            else
                s.cov[c] = prev.cov[c];
        }
    }
    std::vector<double> row{1.0, static_cast<double>(a), static_cast<double>(a_prev), prev.y};
    const auto cr = covariate_row(s.cov);
    row.insert(row.end(), cr.begin(), cr.end());
    double mean = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) mean += y_coef_[i] * row[i];
    s.y = mean + rng.normal(0.0, y_sd_);
    return s;
}

std::unique_ptr<ConditionalModel> GaussianLinearModel::fresh() const {
    return std::make_unique<GaussianLinearModel>(rules_);
}

// --- g-computation Monte Carlo ---------------------------------------------------

std::vector<double> gcomputation_path(const ConditionalModel& model, const StepState& initial,
                                      const Regime& regime, int steps, int k_offset, Rng& rng) {
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(steps));
    StepState state = initial;
    int a_prev = regime.pre_study_treatment(0);
    for (int s = 1; s <= steps; ++s) {
        const int a = regime.treatment_at(s);
        state = model.advance(state, a, a_prev, k_offset + s, rng);
        path.push_back(state.y);
        a_prev = a;
    }
    return path;
}

GcompResult gcomputation_mc(const ConditionalModel& model, const StepState& initial, int steps,
                            int reps, std::uint64_t seed) {
    if (reps < 1) throw ValidationError("gcomputation_mc: reps must be >= 1");
    if (steps < 1) throw ValidationError("gcomputation_mc: steps must be >= 1");
    std::vector<stats::RunningSum> sum(static_cast<std::size_t>(steps));
    std::vector<stats::RunningSum> sum_sq(static_cast<std::size_t>(steps));
    for (int r = 0; r < reps; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const auto treated = gcomputation_path(model, initial, Regime::always(1), steps, 0, rng);
        const auto control = gcomputation_path(model, initial, Regime::always(0), steps, 0, rng);
        for (int s = 0; s < steps; ++s) {
            const double d = treated[static_cast<std::size_t>(s)] -
                             control[static_cast<std::size_t>(s)];
            sum[static_cast<std::size_t>(s)].add(d);
            sum_sq[static_cast<std::size_t>(s)].add(d * d);
        }
    }
    GcompResult result;
    result.reps = reps;
    result.contrast.resize(static_cast<std::size_t>(steps));
    result.mc_sd.resize(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        const double m = sum[static_cast<std::size_t>(s)].value() / reps;
        result.contrast[static_cast<std::size_t>(s)] = m;
        const double msq = sum_sq[static_cast<std::size_t>(s)].value() / reps;
        result.mc_sd[static_cast<std::size_t>(s)] =
            reps > 1 ? std::sqrt(std::max(0.0, (msq - m * m) * reps / (reps - 1.0))) : 0.0;
    }
    return result;
}

// --- parametric bootstrap ---------------------------------------------------------

Trajectory simulate_replicate(const ConditionalModel& fitted, const Trajectory& original,
                              Rng& rng) {
    Trajectory rep = original; // schedule/coding metadata carried over
    StepState state = fitted.initial_state(original);
    for (int k = 2; k <= original.t; ++k) {
        state = fitted.advance(state, original.a[static_cast<std::size_t>(k - 1)],
                               original.a[static_cast<std::size_t>(k - 2)], k, rng);
        rep.y[static_cast<std::size_t>(k - 1)] = state.y;
        if (!rep.y_level.empty()) rep.y_level[static_cast<std::size_t>(k - 1)] = state.y_level;
        if (!rep.l_level.empty()) rep.l_level[static_cast<std::size_t>(k - 1)] = state.l_level;
        for (std::size_t c = 0; c < state.cov.size() && c < rep.covariates.size(); ++c)
            rep.covariates[c][static_cast<std::size_t>(k - 1)] = state.cov[c];
    }
    return rep;
}

BootstrapResult parametric_bootstrap(const ConditionalModel& fitted, const Trajectory& original,
                                     const std::function<std::vector<double>(const Trajectory&)>& inner,
                                     const BootstrapOptions& options, std::uint64_t seed) {
    if (options.replicates < 2)
        throw ValidationError("parametric_bootstrap: needs at least 2 replicates");
    if (!fitted.fitted())
        throw EstimationError("parametric_bootstrap: model is not fitted");

    const auto center = inner(original);
    const std::size_t width = center.size();
    std::vector<std::vector<double>> draws;
    draws.reserve(static_cast<std::size_t>(options.replicates));
    int failures = 0;
    std::string last_error;
    for (int b = 0; b < options.replicates; ++b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        try {
            const auto rep = simulate_replicate(fitted, original, rng);
            auto series = inner(rep);
            if (series.size() != width)
                throw EstimationError("parametric_bootstrap: replicate series length mismatch");
            draws.push_back(std::move(series));
        } catch (const EstimationError& e) {
            ++failures;
            last_error = e.what();
        }
    }
    const double failure_rate = static_cast<double>(failures) / options.replicates;
    if (failure_rate > options.max_failure_rate)
        throw EstimationError("parametric_bootstrap: " + std::to_string(failures) + " of " +
                              std::to_string(options.replicates) + " replicates failed (last: " +
                              last_error + ")");
    if (draws.size() < 2)
        throw EstimationError("parametric_bootstrap: too few successful replicates");

    BootstrapResult result;
    result.failures = failures;
    result.replicates = options.replicates;
    result.per_k.resize(width);
    const double z = stats::normal_quantile(0.5 + options.level / 2.0);
    const int n1 = static_cast<int>(std::count(original.a.begin(), original.a.end(), 1));
    const int n0 = original.t - n1;
    std::vector<double> column(draws.size());
    for (std::size_t kk = 0; kk < width; ++kk) {
        for (std::size_t b = 0; b < draws.size(); ++b) column[b] = draws[b][kk];
        Estimate est;
        est.point = center[kk];
        est.level = options.level;
        est.n_treated = n1;
        est.n_control = n0;
        est.se = std::sqrt(stats::sample_variance(column));
        if (options.percentile) {
            std::vector<double> sorted = column;
            std::sort(sorted.begin(), sorted.end());
            const auto quantile = [&](double p) {
                const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
                const std::size_t lo = static_cast<std::size_t>(pos);
                const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
                return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
            };
            est.ci_low = quantile(0.5 - options.level / 2.0);
            est.ci_high = quantile(0.5 + options.level / 2.0);
            est.method = "g-formula/parametric-bootstrap(percentile)";
        } else {
            est.ci_low = est.point - z * est.se;
            est.ci_high = est.point + z * est.se;
            est.method = "g-formula/parametric-bootstrap(normal)";
        }
        result.per_k[kk] = est;
    }
    return result;
}

} // namespace nof1
