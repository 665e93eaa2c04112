#include "gapchain/simulate.hpp"

#include <sstream>

namespace gapchain {

Trajectory simulate(const StochasticMatrix& p, std::size_t start, std::size_t steps,
                    std::uint64_t seed) {
    const std::size_t r = p.order();
    if (start >= r) {
        std::ostringstream msg;
        msg << "start state " << start << " out of range for order " << r;
        throw Error(msg.str());
    }
    if (steps == 0) throw Error("simulation needs at least one step");

    std::vector<char> row_checked(r, 0);
    auto check_row = [&](std::size_t i) {
        if (row_checked[i]) return;
        double sum = 0.0;
        for (std::size_t j = 0; j < r; ++j) sum += p(i, j);
        if (sum < 1.0 - 1e-9) {
            std::ostringstream msg;
            msg << "row " << i << " sums to " << sum << "; cannot sample from it";
            throw Error(msg.str());
        }
        row_checked[i] = 1;
    };

    SplitMix64 rng(seed);
    Trajectory traj{seed, {}};
    traj.states.reserve(steps + 1);
    traj.states.push_back(start);

    std::size_t current = start;
    for (std::size_t step = 0; step < steps; ++step) {
        check_row(current);
        const double u = rng.next_double();
        double acc = 0.0;
        std::size_t next = r;  // sentinel
        std::size_t last_positive = r;
        for (std::size_t j = 0; j < r; ++j) {
            const double pj = p(current, j);
            if (pj > 0.0) last_positive = j;
            acc += pj;
            if (u < acc) {
                next = j;
                break;
            }
        }
        // The draw landed past the accumulated mass (row sum a hair under 1).
        if (next == r) next = last_positive;
        traj.states.push_back(next);
        current = next;
    }
    return traj;
}

Distribution occupancy(const Trajectory& traj, std::size_t order) {
    if (traj.states.empty()) throw Error("occupancy of an empty trajectory");
    std::vector<double> frac(order, 0.0);
    for (std::size_t s : traj.states) {
        if (s >= order) {
            std::ostringstream msg;
            msg << "trajectory state " << s << " out of range for order " << order;
            throw Error(msg.str());
        }
        frac[s] += 1.0;
    }
    for (double& f : frac) f /= static_cast<double>(traj.states.size());
    return Distribution(std::move(frac));
}

}  // namespace gapchain
