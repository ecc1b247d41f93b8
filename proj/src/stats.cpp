// Numerical routines shared by the estimators and diagnostics. The special
// functions (inverse normal, incomplete beta) follow the usual published
// rational/continued-fraction forms.

#include "nof1/stats.hpp"
#include "nof1/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nof1::stats {

void RunningSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> v) {
    RunningSum s;
    for (double x : v) s.add(x);
    return s.value();
}

double mean(std::span<const double> v) {
    if (v.empty()) throw ValidationError("mean of empty sample");
    return compensated_sum(v) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    const auto n = v.size();
    if (n < 2) throw ValidationError("sample variance needs at least 2 observations");
    const double m = mean(v);
    RunningSum ss;
    for (double x : v) ss.add((x - m) * (x - m));
    return ss.value() / static_cast<double>(n - 1);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Acklam's rational approximation refined with one Halley step.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw ValidationError("normal_quantile: p must lie in (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};

    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement against erfc
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

namespace {

// continued fraction for the incomplete beta (Lentz)
double beta_cf(double a, double b, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double dd = 1.0 - qab * x / qap;
    if (std::abs(dd) < fpmin) dd = fpmin;
    dd = 1.0 / dd;
    double h = dd;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        dd = 1.0 + aa * dd;
        if (std::abs(dd) < fpmin) dd = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        dd = 1.0 / dd;
        h *= dd * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        dd = 1.0 + aa * dd;
        if (std::abs(dd) < fpmin) dd = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        dd = 1.0 / dd;
        const double del = dd * c;
        h *= del;
        if (std::abs(del - 1.0) < 10.0 * eps) break;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, double df) {
    if (df <= 0.0) throw ValidationError("student_t_cdf: df must be positive");
    if (x == 0.0) return 0.5;
    const double t2 = x * x;
    const double ib = incomplete_beta(df / 2.0, 0.5, df / (df + t2));
    return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double two_sided_t_pvalue(double t, double df) {
    const double tail = 1.0 - student_t_cdf(std::abs(t), df);
    return std::min(1.0, 2.0 * tail);
}

WelchResult welch_t_test(std::span<const double> group1, std::span<const double> group0) {
    const double n1 = static_cast<double>(group1.size());
    const double n0 = static_cast<double>(group0.size());
    if (group1.size() < 2 || group0.size() < 2)
        throw EstimationError("welch_t_test: each group needs at least 2 observations");
    const double m1 = mean(group1), m0 = mean(group0);
    const double v1 = sample_variance(group1), v0 = sample_variance(group0);
    const double se2 = v1 / n1 + v0 / n0;
    if (se2 == 0.0) {
        // both groups constant: zero statistic if equal, infinite otherwise
        if (m1 == m0) return {0.0, n1 + n0 - 2.0, 1.0};
        return {std::numeric_limits<double>::infinity(), n1 + n0 - 2.0, 0.0};
    }
    const double t = (m1 - m0) / std::sqrt(se2);
    const double df = se2 * se2 /
                      (v1 * v1 / (n1 * n1 * (n1 - 1.0)) + v0 * v0 / (n0 * n0 * (n0 - 1.0)));
    return {t, df, two_sided_t_pvalue(t, df)};
}

OlsResult ols_slope_test(std::span<const double> x, std::span<const double> y) {
    const auto n = x.size();
    if (n != y.size()) throw ValidationError("ols_slope_test: length mismatch");
    if (n < 3) throw EstimationError("ols_slope_test: needs at least 3 observations");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw EstimationError("ols_slope_test: regressor is constant");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - intercept - slope * x[i];
        rss += r * r;
    }
    const double df = static_cast<double>(n) - 2.0;
    const double s2 = rss / df;
    const double se = std::sqrt(s2 / sxx);
    if (se == 0.0) {
        // perfect fit; a zero slope means no trend at all
        const double p = (slope == 0.0) ? 1.0 : 0.0;
        return {intercept, slope, 0.0, slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity(), df, p};
    }
    const double t = slope / se;
    return {intercept, slope, se, t, df, two_sided_t_pvalue(t, df)};
}

MannKendallResult mann_kendall(std::span<const double> v) {
    const auto n = v.size();
    if (n < 4) throw EstimationError("mann_kendall: needs at least 4 observations");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = v[j] - v[i];
            s += (d > 0.0) - (d < 0.0);
        }
    // tie correction
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    const double nd = static_cast<double>(n);
    double var_s = nd * (nd - 1.0) * (2.0 * nd + 5.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const double tie = static_cast<double>(j - i);
        if (tie > 1.0) var_s -= tie * (tie - 1.0) * (2.0 * tie + 5.0);
        i = j;
    }
    var_s /= 18.0;
    if (var_s <= 0.0) return {s, 0.0, 0.0, 1.0};
    double z = 0.0;
    if (s > 0.0) z = (s - 1.0) / std::sqrt(var_s);
    else if (s < 0.0) z = (s + 1.0) / std::sqrt(var_s);
    const double p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    return {s, var_s, z, p};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 1 || b.size() < 1)
        throw EstimationError("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    double d = 0.0, fa = 0.0, fb = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() && ib < sb.size()) {
        const double va = sa[ia], vb = sb[ib];
        if (va <= vb) fa = static_cast<double>(++ia) / na;
        if (vb <= va) fb = static_cast<double>(++ib) / nb;
        d = std::max(d, std::abs(fa - fb));
    }
    const double ne = na * nb / (na + nb);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    // asymptotic Kolmogorov tail
    double p = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    p = std::clamp(2.0 * p, 0.0, 1.0);
    return {d, p};
}

} // namespace nof1::stats
