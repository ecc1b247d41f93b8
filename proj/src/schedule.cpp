#include "nof1/schedule.hpp"
#include "nof1/errors.hpp"

#include <cmath>
#include <numeric>

namespace nof1 {

Schedule::Schedule(std::vector<int> cells) : cells_(std::move(cells)) {
    if (cells_.size() < 2)
        throw ValidationError("schedule: cycle length must be at least 2");
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i] != 0 && cells_[i] != 1)
            throw ValidationError("schedule: cell " + std::to_string(i + 1) +
                                  " is not 0 or 1");
}

Schedule Schedule::from_string(const std::string& bits) {
    std::vector<int> cells;
    cells.reserve(bits.size());
    for (char c : bits) {
        if (c == '0') cells.push_back(0);
        else if (c == '1') cells.push_back(1);
        else throw ValidationError(std::string("schedule: invalid character '") + c + "'");
    }
    return Schedule(std::move(cells));
}

std::string Schedule::to_string() const {
    std::string s;
    s.reserve(cells_.size());
    for (int c : cells_) s.push_back(c ? '1' : '0');
    return s;
}

int assign_treatment(const Schedule& schedule, int k) {
    if (k < 1) throw ValidationError("assign_treatment: k must be >= 1");
    const int q = schedule.cycle_length();
    return schedule.cells()[static_cast<std::size_t>((k - 1) % q)];
}

std::vector<int> expand_schedule(const Schedule& schedule, int t) {
    if (t < 1) throw ValidationError("expand_schedule: t must be >= 1");
    std::vector<int> a(static_cast<std::size_t>(t));
    for (int k = 1; k <= t; ++k)
        a[static_cast<std::size_t>(k - 1)] = assign_treatment(schedule, k);
    return a;
}

ScheduleVerdict validate_basic(const Schedule& schedule) {
    const auto& c = schedule.cells();
    const int sum = std::accumulate(c.begin(), c.end(), 0);
    if (sum == 0) return {false, "treatment never assigned"};
    if (sum == static_cast<int>(c.size())) return {false, "comparator never assigned"};
    return {true, ""};
}

ScheduleVerdict validate_relaxed(const Schedule& schedule) {
    const auto& c = schedule.cells();
    bool pair[2] = {false, false};
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
        if (c[k] == c[k + 1]) pair[static_cast<std::size_t>(c[k])] = true;
    if (pair[0] && pair[1]) return {true, ""};
    std::string reason;
    if (!pair[0]) reason += "no adjacent comparator pair";
    if (!pair[1]) {
        if (!reason.empty()) reason += "; ";
        reason += "no adjacent treatment pair";
    }
    return {false, reason};
}

double treated_fraction(const Schedule& schedule) {
    const auto verdict = validate_basic(schedule);
    if (!verdict.valid)
        throw ValidationError("treated_fraction: " + verdict.reason);
    const auto& c = schedule.cells();
    const int sum = std::accumulate(c.begin(), c.end(), 0);
    return static_cast<double>(sum) / static_cast<double>(c.size());
}

Design::Design(std::vector<Schedule> schedules, std::vector<double> probabilities, int horizon_t)
    : schedules_(std::move(schedules)), probabilities_(std::move(probabilities)),
      horizon_t_(horizon_t) {
    if (schedules_.empty()) throw ValidationError("design: empty schedule set");
    const int q = schedules_.front().cycle_length();
    for (const auto& z : schedules_)
        if (z.cycle_length() != q)
            throw ValidationError("design: schedules must share one cycle length");
    if (probabilities_.size() != schedules_.size())
        throw ValidationError("design: one probability per schedule required");
    double total = 0.0;
    for (double p : probabilities_) {
        if (p < 0.0) throw ValidationError("design: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("design: probabilities must sum to 1");
    if (horizon_t_ < q)
        throw ValidationError("design: horizon must be at least one cycle");
}

Design::Design(std::vector<Schedule> schedules, int horizon_t)
    : Design(schedules,
             std::vector<double>(schedules.size(), 1.0 / static_cast<double>(schedules.size())),
             horizon_t) {}

namespace {

Schedule block_schedule(int zeros, int ones) {
    std::vector<int> cells;
    cells.insert(cells.end(), static_cast<std::size_t>(zeros), 0);
    cells.insert(cells.end(), static_cast<std::size_t>(ones), 1);
    return Schedule(std::move(cells));
}

} // namespace

std::vector<NamedDesign> canonical_designs() {
    std::vector<NamedDesign> out;
    out.push_back({"AB", Design({block_schedule(7, 7)}, 14)});
    out.push_back({"ABAB", Design({block_schedule(7, 7)}, 28)});
    out.push_back({"ABA", Design({block_schedule(10, 10)}, 30)});
    out.push_back({"ABBA", Design({block_schedule(7, 14)}, 28)});

    // per-day randomization: every length-14 sequence assigning each value at
    // least once, with equal probability
    std::vector<Schedule> uniform;
    uniform.reserve((1u << 14) - 2);
    for (unsigned mask = 1; mask < (1u << 14) - 1; ++mask) {
        std::vector<int> cells(14);
        for (int j = 0; j < 14; ++j) cells[static_cast<std::size_t>(j)] = (mask >> j) & 1u;
        uniform.emplace_back(std::move(cells));
    }
    out.push_back({"uniform-daily", Design(std::move(uniform), 14)});
    return out;
}

} // namespace nof1
