#ifndef NOF1_ERRORS_HPP
#define NOF1_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nof1 {

// Malformed inputs: broken invariants in schedules, model specs, configs, CSV files.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Estimation cannot proceed on the given data (empty arm, unobserved kernel row, ...).
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nof1

#endif
