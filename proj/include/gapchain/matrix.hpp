#pragma once

#include <cstddef>
#include <vector>

#include "gapchain/error.hpp"

namespace gapchain {

/// Probability vector over the states of a chain: entries >= 0, summing to 1
/// within `tolerance`.
class Distribution {
public:
    explicit Distribution(std::vector<double> probabilities, double tolerance = 1e-9);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& values() const { return probs_; }

private:
    std::vector<double> probs_;
};

/// Square row-stochastic matrix. entry(i, j) is the probability of moving
/// from state i to state j in one step.
///
/// Rows must sum to 1 within the instance's recorded slack. Freshly estimated
/// matrices use the strict slack (1e-9). Matrices transcribed from rounded
/// published sources may be constructed with `as_published = true`, which
/// admits a row-sum error up to 1e-3 and does not renormalize: the rounded
/// entries are kept exactly as printed.
class StochasticMatrix {
public:
    static constexpr double kStrictRowTolerance = 1e-9;
    static constexpr double kPublishedRowTolerance = 1e-3;

    StochasticMatrix(std::size_t order, std::vector<double> entries, bool as_published = false);

    static StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                      bool as_published = false);
    static StochasticMatrix identity(std::size_t order);

    /// Construct with an explicit row-sum slack. Used by matrix arithmetic to
    /// carry a measured bound through products; the slack never renormalizes.
    static StochasticMatrix with_row_tolerance(std::size_t order, std::vector<double> entries,
                                               double row_tolerance);

    std::size_t order() const { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }
    const std::vector<double>& entries() const { return entries_; }
    std::vector<double> row(std::size_t i) const;

    /// Row-sum slack recorded on this instance.
    double row_tolerance() const { return row_tolerance_; }

private:
    StochasticMatrix(std::size_t order, std::vector<double> entries, double row_tolerance,
                     int /*tag*/);

    std::size_t order_;
    std::vector<double> entries_;
    double row_tolerance_;
};

/// Outcome of the search for the equilibrium power of a chain.
struct ConvergenceReport {
    bool converged;
    std::size_t steps;       // first power at equilibrium; max_steps when not converged
    double tolerance;
    Distribution limit;      // common row at equilibrium (mean of final rows)
    StochasticMatrix final_matrix;
};

StochasticMatrix multiply(const StochasticMatrix& a, const StochasticMatrix& b);

/// P^n. Exponent-by-squaring for n > 16, repeated multiplication otherwise;
/// both routes agree within 1e-12 per entry. P^0 is the identity.
StochasticMatrix power(const StochasticMatrix& p, std::size_t n);

/// Smallest n <= max_steps such that in P^n every column's spread across rows
/// (max - min) is below `tolerance`. Non-convergence is reported, not thrown.
ConvergenceReport find_equilibrium(const StochasticMatrix& p, double tolerance,
                                   std::size_t max_steps);

/// Solves pi P = pi, sum(pi) = 1 by Gaussian elimination, replacing the last
/// balance equation with the normalization constraint. Throws when the
/// solution is not unique (reducible chain), detected at a relative pivot
/// threshold of 1e-10.
Distribution stationary_direct(const StochasticMatrix& p);

/// start . P^n
Distribution evolve(const Distribution& start, const StochasticMatrix& p, std::size_t n);

}  // namespace gapchain
