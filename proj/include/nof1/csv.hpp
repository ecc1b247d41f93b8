#ifndef NOF1_CSV_HPP
#define NOF1_CSV_HPP

#include "nof1/trajectory.hpp"

#include <map>
#include <string>
#include <vector>

namespace nof1 {

// Column mapping for a panel CSV. Defaults match the files this tool writes.
struct ColumnMapping {
    std::string time = "time";
    std::string treatment = "treatment";
    std::string outcome = "outcome";
    std::vector<std::string> covariates; // empty = every remaining column
};

// Reads a strict panel file: header row; time contiguous 1..t; treatment in
// {0,1}; no missing cells. String-valued covariate levels are coded in
// first-appearance order; the coding is returned so reports can record it.
struct IngestResult {
    Trajectory trajectory;
    // per covariate: observed string level -> assigned numeric code (only for
    // non-numeric columns)
    std::map<std::string, std::vector<std::string>> level_coding;
};

IngestResult ingest_csv(const std::string& path, const ColumnMapping& mapping = {});

void write_csv(const std::string& path, const Trajectory& traj);

} // namespace nof1

#endif
