#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gapchain/error.hpp"

namespace gapchain {

/// Half-open value band [lower, upper) with a short label like "s1".
struct StateInterval {
    std::string label;
    double lower;  // inclusive
    double upper;  // exclusive
};

/// Ordered, disjoint, labeled intervals over the gap value d. Boundary
/// comparison is exact: inputs are two-decimal values, so no epsilon is
/// applied. Custom spaces with values near interval edges should account
/// for that.
class StateSpace {
public:
    explicit StateSpace(std::vector<StateInterval> states);

    std::size_t size() const { return states_.size(); }
    const StateInterval& state(std::size_t i) const { return states_[i]; }
    const std::vector<StateInterval>& states() const { return states_; }

    /// Position of the labeled state; throws on unknown labels.
    std::size_t index_of(const std::string& label) const;

private:
    std::vector<StateInterval> states_;
};

enum class Gender { male, female };

/// One graduation cycle: its label, the absolute CGPA mean difference d, and
/// the gender with the higher mean.
struct CycleRecord {
    std::string cycle;
    double d;
    Gender favoured;
};

/// Chronologically ordered cycle records; the order is the transition order.
class CycleSeries {
public:
    CycleSeries() = default;
    explicit CycleSeries(std::vector<CycleRecord> records);

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const CycleRecord& operator[](std::size_t i) const { return records_[i]; }
    const std::vector<CycleRecord>& records() const { return records_; }
    std::vector<double> d_values() const;

private:
    std::vector<CycleRecord> records_;
};

struct StateStep {
    std::string cycle;
    std::string state;
};

/// Per-cycle state assignments, same length and order as the source series.
struct StateSequence {
    std::vector<StateStep> steps;
};

/// The five default gap states. The band [0.40, 0.50) is deliberately absent:
/// the source data never lands there, and values inside it are unclassifiable.
StateSpace default_state_space();

/// Label of the unique state whose [lower, upper) contains the value; throws
/// an error carrying the value and the nearest interval when none does.
std::string classify(const StateSpace& space, double value);

/// Per-record classification preserving order. The first unclassifiable value
/// aborts with its cycle label.
StateSequence discretize(const StateSpace& space, const CycleSeries& series);

std::string to_string(Gender g);
Gender gender_from_string(const std::string& s);

}  // namespace gapchain
