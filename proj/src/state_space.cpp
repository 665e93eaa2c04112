#include "gapchain/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gapchain {

StateSpace::StateSpace(std::vector<StateInterval> states) : states_(std::move(states)) {
    if (states_.empty()) throw Error("state space must contain at least one state");
    std::stable_sort(states_.begin(), states_.end(),
                     [](const StateInterval& a, const StateInterval& b) { return a.lower < b.lower; });
    std::set<std::string> labels;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const StateInterval& s = states_[i];
        if (!(s.lower < s.upper)) {
            std::ostringstream msg;
            msg << "state " << s.label << " has empty interval [" << s.lower << ", " << s.upper << ")";
            throw Error(msg.str());
        }
        if (!labels.insert(s.label).second) throw Error("duplicate state label " + s.label);
        if (i > 0 && states_[i - 1].upper > s.lower) {
            std::ostringstream msg;
            msg << "states " << states_[i - 1].label << " and " << s.label << " overlap";
            throw Error(msg.str());
        }
    }
}

std::size_t StateSpace::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i].label == label) return i;
    throw Error("unknown state label " + label);
}

CycleSeries::CycleSeries(std::vector<CycleRecord> records) : records_(std::move(records)) {
    std::set<std::string> labels;
    for (const CycleRecord& rec : records_) {
        if (!(rec.d >= 0.0) || !std::isfinite(rec.d)) {
            std::ostringstream msg;
            msg << "cycle " << rec.cycle << ": d must be a non-negative number, got " << rec.d;
            throw Error(msg.str());
        }
        if (!labels.insert(rec.cycle).second) throw Error("duplicate cycle label " + rec.cycle);
    }
}

std::vector<double> CycleSeries::d_values() const {
    std::vector<double> out;
    out.reserve(records_.size());
    for (const CycleRecord& rec : records_) out.push_back(rec.d);
    return out;
}

StateSpace default_state_space() {
    return StateSpace({{"s1", 0.01, 0.10},
                       {"s2", 0.10, 0.20},
                       {"s3", 0.20, 0.30},
                       {"s4", 0.30, 0.40},
                       {"s5", 0.50, 0.60}});
}

std::string classify(const StateSpace& space, double value) {
    for (const StateInterval& s : space.states())
        if (value >= s.lower && value < s.upper) return s.label;

    // Nothing covers the value; name the nearest interval in the error.
    const StateInterval* nearest = &space.state(0);
    double best = -1.0;
    for (const StateInterval& s : space.states()) {
        const double dist = value < s.lower ? s.lower - value
                          : value >= s.upper ? value - s.upper
                                             : 0.0;
        if (best < 0.0 || dist < best) {
            best = dist;
            nearest = &s;
        }
    }
    std::ostringstream msg;
    msg << "unclassifiable value " << value << ": no state interval contains it; nearest is "
        << nearest->label << " [" << nearest->lower << ", " << nearest->upper << ")";
    throw Error(msg.str());
}

StateSequence discretize(const StateSpace& space, const CycleSeries& series) {
    StateSequence seq;
    seq.steps.reserve(series.size());
    for (const CycleRecord& rec : series.records()) {
        try {
            seq.steps.push_back({rec.cycle, classify(space, rec.d)});
        } catch (const Error& e) {
            throw Error("cycle " + rec.cycle + ": " + e.what());
        }
    }
    return seq;
}

std::string to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

Gender gender_from_string(const std::string& s) {
    if (s == "male") return Gender::male;
    if (s == "female") return Gender::female;
    throw Error("unknown gender '" + s + "', expected male or female");
}

}  // namespace gapchain
