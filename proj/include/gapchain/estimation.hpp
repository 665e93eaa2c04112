#pragma once

#include <cstdint>
#include <vector>

#include "gapchain/matrix.hpp"
#include "gapchain/state_space.hpp"

namespace gapchain {

/// Denominator for the transition-probability estimate of state i.
/// out_transitions (the maximum-likelihood choice, default) divides by the
/// number of observed exits; total_visits divides by all occurrences of the
/// state, including a final occurrence with no successor.
enum class Denominator { out_transitions, total_visits };

/// How to complete a row whose estimated probabilities do not reach 1: a
/// state with no observed exits, or a total_visits row whose final visit has
/// no successor.
enum class ZeroRowPolicy { self_loop, uniform, error };

/// Observed transition counts over a state space. counts[i][j] is the number
/// of i -> j moves; visits[i] counts every occurrence of state i; out_totals[i]
/// counts occurrences followed by a successor.
struct TransitionCounts {
    StateSpace space;
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<std::int64_t> visits;
    std::vector<std::int64_t> out_totals;
};

TransitionCounts count_transitions(const StateSequence& seq, const StateSpace& space);

StochasticMatrix estimate(const TransitionCounts& counts, Denominator denominator,
                          ZeroRowPolicy zero_row_policy);

/// The published transition matrix, exactly as printed (three-decimal first
/// row), constructed with the published row slack. Row s1 is not derivable
/// from the bundled series under any examined counting convention; this
/// verbatim matrix is the canonical input for replicating the published
/// equilibrium.
StochasticMatrix published_matrix();

std::string to_string(Denominator d);
std::string to_string(ZeroRowPolicy p);
Denominator denominator_from_string(const std::string& s);
ZeroRowPolicy zero_row_policy_from_string(const std::string& s);

}  // namespace gapchain
