#ifndef NOF1_VERIFY_HPP
#define NOF1_VERIFY_HPP

#include "nof1/gformula.hpp"
#include "nof1/scm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nof1 {

// Brute-force oracles: sum over every covariate/outcome path instead of
// propagating a state distribution. Exponential cost, usable only at desk
// scale, deliberately independent of the forward-pass implementation.
double enumerated_counterfactual_mean(const DiscreteScm& scm, int u, int k, int x);
double enumerated_theta(const GKernels& kernels, int k, int x, int y0, int l0);

struct CheckResult {
    std::string id;
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 987001;
    // panel files for the published two-participant acne study; the first
    // check is skipped when they are absent
    std::string acne_csv_1 = "data/acne_participant1.csv";
    std::string acne_csv_2 = "data/acne_participant2.csv";
};

// The full verification suite: oracle equivalence plus the Monte Carlo
// studies. Each entry prints as one pass/fail line.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

// render results as the standard pass/fail listing
std::string format_results(const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

} // namespace nof1

#endif
