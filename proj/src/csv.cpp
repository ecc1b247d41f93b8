#include "nof1/csv.hpp"
#include "nof1/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nof1 {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

std::string cell_ref(std::size_t row, const std::string& column) {
    return "row " + std::to_string(row) + ", column '" + column + "'";
}

} // namespace

IngestResult ingest_csv(const std::string& path, const ColumnMapping& mapping) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
    const auto header = split_row(line);

    const auto column_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ValidationError(path + ": no column named '" + name + "'");
        return static_cast<std::size_t>(std::distance(header.begin(), it));
    };

    const std::size_t time_col = column_of(mapping.time);
    const std::size_t treat_col = column_of(mapping.treatment);
    const std::size_t outcome_col = column_of(mapping.outcome);

    std::vector<std::string> covariate_names = mapping.covariates;
    if (covariate_names.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (c != time_col && c != treat_col && c != outcome_col)
                covariate_names.push_back(header[c]);
    }
    std::vector<std::size_t> covariate_cols;
    for (const auto& name : covariate_names) covariate_cols.push_back(column_of(name));

    IngestResult result;
    auto& traj = result.trajectory;
    traj.covariate_names = covariate_names;
    traj.covariates.assign(covariate_names.size(), {});
    std::map<std::string, std::vector<std::string>> coding;

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() && in.peek() == EOF) break;
        const auto cells = split_row(line);
        if (cells.size() != header.size())
            throw ValidationError(path + ": row " + std::to_string(row) + " has " +
                                  std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(header.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (cells[c].empty())
                throw ValidationError(path + ": missing cell at " + cell_ref(row, header[c]));

        double tv = 0.0;
        if (!parse_number(cells[time_col], tv) || tv != std::floor(tv))
            throw ValidationError(path + ": non-integer time at " + cell_ref(row, mapping.time));
        const int expected = static_cast<int>(row) - 1;
        if (static_cast<int>(tv) != expected)
            throw ValidationError(path + ": time must be contiguous 1..t; expected " +
                                  std::to_string(expected) + " at row " + std::to_string(row) +
                                  ", found " + cells[time_col]);

        double av = 0.0;
        if (!parse_number(cells[treat_col], av) || (av != 0.0 && av != 1.0))
            throw ValidationError(path + ": treatment must be 0/1 at " +
                                  cell_ref(row, mapping.treatment));
        traj.a.push_back(static_cast<int>(av));

        double yv = 0.0;
        if (!parse_number(cells[outcome_col], yv))
            throw ValidationError(path + ": non-numeric outcome at " +
                                  cell_ref(row, mapping.outcome));
        traj.y.push_back(yv);

        for (std::size_t c = 0; c < covariate_cols.size(); ++c) {
            const auto& raw = cells[covariate_cols[c]];
            double v = 0.0;
            if (!parse_number(raw, v)) {
                // string level: first-appearance coding
                auto& levels = coding[covariate_names[c]];
                const auto it = std::find(levels.begin(), levels.end(), raw);
                if (it == levels.end()) {
                    levels.push_back(raw);
                    v = static_cast<double>(levels.size()) - 1.0;
                } else {
                    v = static_cast<double>(std::distance(levels.begin(), it));
                }
            }
            traj.covariates[c].push_back(v);
        }
    }
    traj.t = static_cast<int>(traj.a.size());
    if (traj.t < 1) throw ValidationError(path + ": no data rows");
    traj.validate();
    result.level_coding = std::move(coding);
    return result;
}

void write_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "time,treatment,outcome";
    for (const auto& name : traj.covariate_names) out << ',' << name;
    out << '\n';
    out.precision(17);
    for (int k = 1; k <= traj.t; ++k) {
        out << k << ',' << traj.a[static_cast<std::size_t>(k - 1)] << ','
            << traj.y[static_cast<std::size_t>(k - 1)];
        for (const auto& col : traj.covariates) out << ',' << col[static_cast<std::size_t>(k - 1)];
        out << '\n';
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

} // namespace nof1
