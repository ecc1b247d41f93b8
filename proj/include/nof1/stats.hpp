#ifndef NOF1_STATS_HPP
#define NOF1_STATS_HPP

#include <span>
#include <vector>

namespace nof1::stats {

// Neumaier compensated summation; keeps replicate aggregation independent of
// accumulation order.
double compensated_sum(std::span<const double> v);

class RunningSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }
private:
    double sum_ = 0.0, comp_ = 0.0;
};

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v); // n-1 denominator

double normal_cdf(double x);
double normal_quantile(double p);

double student_t_cdf(double x, double df);
double two_sided_t_pvalue(double t, double df);

// regularized incomplete beta I_x(a, b)
double incomplete_beta(double a, double b, double x);

struct WelchResult {
    double statistic;
    double df;
    double p;
};
// Unequal-variance two-sample t test with Welch-Satterthwaite degrees of freedom.
WelchResult welch_t_test(std::span<const double> group1, std::span<const double> group0);

struct OlsResult {
    double intercept;
    double slope;
    double slope_se;
    double t_stat;
    double df;
    double p;
};
// least squares of y on x with a two-sided test of zero slope
OlsResult ols_slope_test(std::span<const double> x, std::span<const double> y);

struct MannKendallResult {
    double s;      // sum of pairwise signs
    double var_s;  // tie-corrected variance
    double z;
    double p;
};
MannKendallResult mann_kendall(std::span<const double> v);

struct KsResult {
    double d;
    double p;
};
// two-sample Kolmogorov-Smirnov with the asymptotic tail (small-sample corrected)
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

} // namespace nof1::stats

#endif
