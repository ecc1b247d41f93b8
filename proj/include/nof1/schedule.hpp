#ifndef NOF1_SCHEDULE_HPP
#define NOF1_SCHEDULE_HPP

#include <string>
#include <vector>

namespace nof1 {

// Cyclic treatment schedule: a block of q binary cells (0 = comparator,
// 1 = treatment) repeated over the study. Time indices are 1-based.
class Schedule {
public:
    explicit Schedule(std::vector<int> cells);
    static Schedule from_string(const std::string& bits); // e.g. "000000111111"

    int cycle_length() const { return static_cast<int>(cells_.size()); }
    const std::vector<int>& cells() const { return cells_; }
    std::string to_string() const;

    bool operator==(const Schedule& other) const { return cells_ == other.cells_; }

private:
    std::vector<int> cells_;
};

// treatment at time k >= 1 under the cyclic rule
int assign_treatment(const Schedule& schedule, int k);

// the full length-t treatment sequence
std::vector<int> expand_schedule(const Schedule& schedule, int t);

struct ScheduleVerdict {
    bool valid;
    std::string reason; // empty when valid
};

// both treatment and comparator assigned at least once per cycle
ScheduleVerdict validate_basic(const Schedule& schedule);

// each value assigned twice in a row somewhere within the cycle
ScheduleVerdict validate_relaxed(const Schedule& schedule);

// proportion of treated cells; requires validate_basic
double treated_fraction(const Schedule& schedule);

// A set of candidate schedules (all one cycle length) with assignment
// probabilities, plus the study horizon.
class Design {
public:
    Design(std::vector<Schedule> schedules, std::vector<double> probabilities, int horizon_t);
    // uniform probabilities over the schedule set
    Design(std::vector<Schedule> schedules, int horizon_t);

    const std::vector<Schedule>& schedules() const { return schedules_; }
    const std::vector<double>& probabilities() const { return probabilities_; }
    int horizon() const { return horizon_t_; }

private:
    std::vector<Schedule> schedules_;
    std::vector<double> probabilities_;
    int horizon_t_;
};

struct NamedDesign {
    std::string name;
    Design design;
};

// Commonly employed single-participant layouts: AB, ABAB, ABA, ABBA and
// per-day uniform randomization over a 14-day horizon.
std::vector<NamedDesign> canonical_designs();

} // namespace nof1

#endif
