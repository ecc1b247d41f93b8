#include "nof1/config.hpp"
#include "nof1/errors.hpp"

#include <cstdio>
#include <fstream>

namespace nof1 {

using nlohmann::json;

namespace {

const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(path + "." + key + ": missing");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path + ": expected a number");
    return j.get<double>();
}

int integer_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ValidationError(path + ": expected an integer");
    return j.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path + ": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// walks nested arrays of shape dims x width and flattens row-major
void read_table(const json& j, const std::vector<int>& dims, int width,
                std::vector<double>& out, const std::string& path) {
    if (dims.empty()) {
        const auto row = number_list(j, path);
        if (static_cast<int>(row.size()) != width)
            throw ValidationError(path + ": row has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(width));
        out.insert(out.end(), row.begin(), row.end());
        return;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dims.front())
        throw ValidationError(path + ": expected an array of length " +
                              std::to_string(dims.front()));
    const std::vector<int> rest(dims.begin() + 1, dims.end());
    for (int i = 0; i < dims.front(); ++i)
        read_table(j[static_cast<std::size_t>(i)], rest, width, out,
                   path + "[" + std::to_string(i) + "]");
}

json write_table(const std::vector<double>& table, const std::vector<int>& dims, int width,
                 std::size_t& offset) {
    if (dims.empty()) {
        json row = json::array();
        for (int i = 0; i < width; ++i) row.push_back(table[offset++]);
        return row;
    }
    json arr = json::array();
    const std::vector<int> rest(dims.begin() + 1, dims.end());
    for (int i = 0; i < dims.front(); ++i) arr.push_back(write_table(table, rest, width, offset));
    return arr;
}

std::vector<int> y_dims(const DiscreteScm& scm) {
    switch (scm.variant) {
        case Variant::basic: return {scm.nu(), 2};
        case Variant::time_trend: return {scm.nu(), scm.nl(), 2, scm.nl()};
        case Variant::relaxed: return {scm.nu(), scm.nl(), 2, scm.ny(), scm.nl(), 2};
    }
    return {};
}

std::vector<int> l_dims(const DiscreteScm& scm) {
    switch (scm.variant) {
        case Variant::basic: return {};
        case Variant::time_trend: return {scm.nu(), scm.nl()};
        case Variant::relaxed: return {scm.nu(), 2, scm.ny(), scm.nl()};
    }
    return {};
}

} // namespace

DiscreteScm discrete_scm_from_json(const json& j, const std::string& path) {
    DiscreteScm scm;
    scm.variant = variant_from_name(
        member(j, "variant", path).get<std::string>());
    scm.y_values = number_list(member(j, "y_values", path), path + ".y_values");
    if (j.contains("l_values"))
        scm.l_values = number_list(j["l_values"], path + ".l_values");
    scm.u_weights = number_list(member(j, "u_weights", path), path + ".u_weights");
    if (j.contains("u_labels")) {
        for (const auto& v : j["u_labels"]) scm.u_labels.push_back(v.get<std::string>());
    }
    if (j.contains("initial")) {
        const auto& init = j["initial"];
        if (init.contains("a")) scm.initial_a = integer_at(init["a"], path + ".initial.a");
        if (init.contains("y")) scm.initial_y = integer_at(init["y"], path + ".initial.y");
        if (init.contains("l")) scm.initial_l = integer_at(init["l"], path + ".initial.l");
    }
    if (j.contains("positivity")) scm.require_positivity = j["positivity"].get<bool>();

    scm.y_table.clear();
    read_table(member(j, "y_kernel", path), y_dims(scm), scm.ny(), scm.y_table,
               path + ".y_kernel");
    if (scm.variant != Variant::basic) {
        scm.l_table.clear();
        read_table(member(j, "l_kernel", path), l_dims(scm), scm.nl(), scm.l_table,
                   path + ".l_kernel");
    }
    scm.validate();
    return scm;
}

AdditiveScm additive_scm_from_json(const json& j, const std::string& path) {
    AdditiveScm scm;
    scm.beta = number_at(member(j, "beta", path), path + ".beta");
    if (j.contains("u_value")) scm.u_value = number_at(j["u_value"], path + ".u_value");
    if (j.contains("noise_sd")) scm.noise_sd = number_at(j["noise_sd"], path + ".noise_sd");
    if (j.contains("noise_family")) {
        const auto name = j["noise_family"].get<std::string>();
        if (name == "gaussian") scm.noise_family = AdditiveScm::Noise::gaussian;
        else if (name == "uniform") scm.noise_family = AdditiveScm::Noise::uniform;
        else if (name == "constant") scm.noise_family = AdditiveScm::Noise::constant;
        else throw ValidationError(path + ".noise_family: unknown family '" + name + "'");
    }
    scm.validate();
    return scm;
}

json discrete_scm_to_json(const DiscreteScm& scm) {
    json j;
    j["variant"] = variant_name(scm.variant);
    j["y_values"] = scm.y_values;
    if (!scm.l_values.empty()) j["l_values"] = scm.l_values;
    j["u_weights"] = scm.u_weights;
    if (!scm.u_labels.empty()) j["u_labels"] = scm.u_labels;
    j["initial"] = {{"a", scm.initial_a}, {"y", scm.initial_y}, {"l", scm.initial_l}};
    j["positivity"] = scm.require_positivity;
    std::size_t offset = 0;
    j["y_kernel"] = write_table(scm.y_table, y_dims(scm), scm.ny(), offset);
    if (scm.variant != Variant::basic) {
        offset = 0;
        j["l_kernel"] = write_table(scm.l_table, l_dims(scm), scm.nl(), offset);
    }
    return j;
}

json gkernels_to_json(const GKernels& kernels) {
    json j;
    j["y_values"] = kernels.y_values;
    j["nl"] = kernels.nl;
    j["kappa"] = kernels.kappa;
    for (int x = 0; x <= 1; ++x) {
        const std::string tag = std::to_string(x);
        std::size_t offset = 0;
        j["gy" + tag] = write_table(kernels.gy[x], {kernels.nl, kernels.ny, kernels.nl},
                                    kernels.ny, offset);
        offset = 0;
        j["gl" + tag] = write_table(kernels.gl[x], {kernels.ny, kernels.nl}, kernels.nl, offset);
        j["gy" + tag + "_valid"] = std::vector<int>(kernels.gy_valid[x].begin(),
                                                    kernels.gy_valid[x].end());
        j["gl" + tag + "_valid"] = std::vector<int>(kernels.gl_valid[x].begin(),
                                                    kernels.gl_valid[x].end());
        j["gy" + tag + "_counts"] = kernels.gy_counts[x];
        j["gl" + tag + "_counts"] = kernels.gl_counts[x];
    }
    return j;
}

GKernels gkernels_from_json(const json& j, const std::string& path) {
    GKernels kernels;
    kernels.y_values = number_list(member(j, "y_values", path), path + ".y_values");
    kernels.ny = static_cast<int>(kernels.y_values.size());
    kernels.nl = integer_at(member(j, "nl", path), path + ".nl");
    kernels.kappa = number_at(member(j, "kappa", path), path + ".kappa");
    kernels.allocate();
    for (int x = 0; x <= 1; ++x) {
        const std::string tag = std::to_string(x);
        kernels.gy[x].clear();
        read_table(member(j, "gy" + tag, path), {kernels.nl, kernels.ny, kernels.nl},
                   kernels.ny, kernels.gy[x], path + ".gy" + tag);
        kernels.gl[x].clear();
        read_table(member(j, "gl" + tag, path), {kernels.ny, kernels.nl}, kernels.nl,
                   kernels.gl[x], path + ".gl" + tag);
        const auto yv = member(j, "gy" + tag + "_valid", path).get<std::vector<int>>();
        const auto lv = member(j, "gl" + tag + "_valid", path).get<std::vector<int>>();
        if (yv.size() != kernels.gy_rows() || lv.size() != kernels.gl_rows())
            throw ValidationError(path + ": validity flag length mismatch");
        kernels.gy_valid[x].assign(yv.begin(), yv.end());
        kernels.gl_valid[x].assign(lv.begin(), lv.end());
        if (j.contains("gy" + tag + "_counts"))
            kernels.gy_counts[x] = number_list(j["gy" + tag + "_counts"],
                                               path + ".gy" + tag + "_counts");
        if (j.contains("gl" + tag + "_counts"))
            kernels.gl_counts[x] = number_list(j["gl" + tag + "_counts"],
                                               path + ".gl" + tag + "_counts");
    }
    return kernels;
}

RunConfig RunConfig::load(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open config '" + file + "'");
    RunConfig cfg;
    try {
        in >> cfg.raw;
    } catch (const std::exception& e) {
        throw ValidationError("config '" + file + "': " + e.what());
    }
    if (cfg.raw.contains("seed")) {
        if (!cfg.raw["seed"].is_number_unsigned() && !cfg.raw["seed"].is_number_integer())
            throw ValidationError("config.seed: expected an integer");
        cfg.seed = cfg.raw["seed"].get<std::uint64_t>();
        cfg.has_seed = true;
    }
    return cfg;
}

const json& RunConfig::require(const std::string& key) const {
    return member(raw, key, "config");
}

std::string RunConfig::digest() const {
    const std::string bytes = raw.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ColumnMapping column_mapping_from_json(const json& j) {
    ColumnMapping mapping;
    if (j.contains("time")) mapping.time = j["time"].get<std::string>();
    if (j.contains("treatment")) mapping.treatment = j["treatment"].get<std::string>();
    if (j.contains("outcome")) mapping.outcome = j["outcome"].get<std::string>();
    if (j.contains("covariates"))
        for (const auto& v : j["covariates"]) mapping.covariates.push_back(v.get<std::string>());
    return mapping;
}

std::vector<CovariateRule> covariate_rules_from_json(const json& j) {
    std::vector<CovariateRule> rules;
    if (!j.is_array()) throw ValidationError("covariates: expected an array of rules");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "covariates[" + std::to_string(i) + "]";
        CovariateRule rule;
        rule.name = member(j[i], "name", path).get<std::string>();
        const auto kind = member(j[i], "kind", path).get<std::string>();
        if (kind == "cyclic") rule.kind = CovariateRule::Kind::cyclic;
        else if (kind == "ar") rule.kind = CovariateRule::Kind::ar;
        else throw ValidationError(path + ".kind: unknown kind '" + kind + "'");
        if (j[i].contains("period")) rule.period = integer_at(j[i]["period"], path + ".period");
        rules.push_back(rule);
    }
    return rules;
}

} // namespace nof1
