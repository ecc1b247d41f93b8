#ifndef NOF1_CONFIG_HPP
#define NOF1_CONFIG_HPP

#include "nof1/csv.hpp"
#include "nof1/gformula.hpp"
#include "nof1/scm.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace nof1 {

// Declarative run configuration. Model specifications live under "scm";
// kernels are nested probability tables (see README for the axis order).
// The schema validator reports the first violated invariant with its path.

DiscreteScm discrete_scm_from_json(const nlohmann::json& j, const std::string& path = "scm");
AdditiveScm additive_scm_from_json(const nlohmann::json& j, const std::string& path = "scm");

nlohmann::json discrete_scm_to_json(const DiscreteScm& scm);

// Estimated-kernel dumps share the config format, so a fit can be written out
// and evaluated again later.
nlohmann::json gkernels_to_json(const GKernels& kernels);
GKernels gkernels_from_json(const nlohmann::json& j, const std::string& path = "kernels");

struct RunConfig {
    nlohmann::json raw;
    std::uint64_t seed = 0;
    bool has_seed = false;

    static RunConfig load(const std::string& file);

    // checked field access with path-carrying errors
    const nlohmann::json& require(const std::string& key) const;
    std::string digest() const; // FNV-1a over the canonical serialization
};

ColumnMapping column_mapping_from_json(const nlohmann::json& j);
std::vector<CovariateRule> covariate_rules_from_json(const nlohmann::json& j);

} // namespace nof1

#endif
