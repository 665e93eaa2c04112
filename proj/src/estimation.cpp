#include "gapchain/estimation.hpp"

#include <sstream>

namespace gapchain {

TransitionCounts count_transitions(const StateSequence& seq, const StateSpace& space) {
    const std::size_t r = space.size();
    TransitionCounts tc{space,
                        std::vector<std::vector<std::int64_t>>(r, std::vector<std::int64_t>(r, 0)),
                        std::vector<std::int64_t>(r, 0), std::vector<std::int64_t>(r, 0)};

    std::vector<std::size_t> indices;
    indices.reserve(seq.steps.size());
    for (const StateStep& step : seq.steps) indices.push_back(space.index_of(step.state));

    for (std::size_t k = 0; k < indices.size(); ++k) {
        tc.visits[indices[k]] += 1;
        if (k + 1 < indices.size()) {
            tc.counts[indices[k]][indices[k + 1]] += 1;
            tc.out_totals[indices[k]] += 1;
        }
    }
    return tc;
}

StochasticMatrix estimate(const TransitionCounts& counts, Denominator denominator,
                          ZeroRowPolicy zero_row_policy) {
    const std::size_t r = counts.space.size();
    std::vector<double> entries(r * r, 0.0);

    for (std::size_t i = 0; i < r; ++i) {
        const std::int64_t denom = denominator == Denominator::out_transitions
                                       ? counts.out_totals[i]
                                       : counts.visits[i];
        double row_sum = 0.0;
        if (denom > 0) {
            for (std::size_t j = 0; j < r; ++j) {
                entries[i * r + j] =
                    static_cast<double>(counts.counts[i][j]) / static_cast<double>(denom);
                row_sum += entries[i * r + j];
            }
        }
        const double deficit = 1.0 - row_sum;
        if (deficit > 1e-9) {
            switch (zero_row_policy) {
                case ZeroRowPolicy::self_loop:
                    entries[i * r + i] += deficit;
                    break;
                case ZeroRowPolicy::uniform:
                    for (std::size_t j = 0; j < r; ++j)
                        entries[i * r + j] += deficit / static_cast<double>(r);
                    break;
                case ZeroRowPolicy::error: {
                    std::ostringstream msg;
                    msg << "state " << counts.space.state(i).label
                        << " has a deficient row (probability mass " << row_sum << " under "
                        << to_string(denominator) << ")";
                    throw Error(msg.str());
                }
            }
        }
    }
    return StochasticMatrix(r, std::move(entries));
}

StochasticMatrix published_matrix() {
    return StochasticMatrix::from_rows({{0.333, 0.167, 0.167, 0.333, 0.0},
                                        {0.5, 0.0, 0.0, 0.5, 0.0},
                                        {0.0, 1.0, 0.0, 0.0, 0.0},
                                        {1.0, 0.0, 0.0, 0.0, 0.0},
                                        {1.0, 0.0, 0.0, 0.0, 0.0}},
                                       /*as_published=*/true);
}

std::string to_string(Denominator d) {
    return d == Denominator::out_transitions ? "out_transitions" : "total_visits";
}

std::string to_string(ZeroRowPolicy p) {
    switch (p) {
        case ZeroRowPolicy::self_loop: return "self_loop";
        case ZeroRowPolicy::uniform: return "uniform";
        case ZeroRowPolicy::error: return "error";
    }
    return "self_loop";
}

Denominator denominator_from_string(const std::string& s) {
    if (s == "out_transitions") return Denominator::out_transitions;
    if (s == "total_visits") return Denominator::total_visits;
    throw Error("unknown denominator '" + s + "', expected out_transitions or total_visits");
}

ZeroRowPolicy zero_row_policy_from_string(const std::string& s) {
    if (s == "self_loop") return ZeroRowPolicy::self_loop;
    if (s == "uniform") return ZeroRowPolicy::uniform;
    if (s == "error") return ZeroRowPolicy::error;
    throw Error("unknown zero-row policy '" + s + "', expected self_loop, uniform or error");
}

}  // namespace gapchain
