#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapchain/estimation.hpp"
#include "gapchain/matrix.hpp"
#include "gapchain/state_space.hpp"
#include "gapchain/stats.hpp"

namespace gapchain {

/// One graduating student: cycle, gender, and exit CGPA on the 5-point scale.
struct StudentRecord {
    std::string cycle;
    Gender gender;
    double cgpa;
};

struct PipelineConfig {
    Denominator denominator = Denominator::out_transitions;
    ZeroRowPolicy zero_row_policy = ZeroRowPolicy::self_loop;
    double tolerance = 1e-4;
    std::size_t max_steps = 100;
    double cycles_per_year = 2.0;
    double alpha = 0.05;
};

struct ClosurePrediction {
    std::size_t cycles;
    double years;  // cycles / cycles_per_year, ceiled to one decimal
};

/// Equilibrium and stationary analysis of one transition matrix.
struct MatrixAnalysis {
    StochasticMatrix matrix;
    ConvergenceReport convergence;
    Distribution stationary;
};

/// Everything the replication produces. Divergences from the published
/// figures are appended to `discrepancies`, never silently reconciled.
struct ReplicationReport {
    CycleSeries series;
    StateSequence state_sequence;
    TransitionCounts counts;
    MatrixAnalysis estimated;
    MatrixAnalysis published;
    GofResult gof;  // recomputed from the series under the equal-gap null
    std::optional<TTestResult> ttest;
    ClosurePrediction closure;  // from the published-matrix convergence
    std::vector<std::string> discrepancies;
};

struct GapSeriesResult {
    CycleSeries series;
    std::vector<double> unrounded_d;  // before the two-decimal rounding
    std::vector<std::string> warnings;
};

/// Per-cycle gap d = |mean male CGPA - mean female CGPA| rounded to two
/// decimals, favoured = gender with the higher mean (ties go to male with a
/// recorded warning). Cycles keep first-encounter order.
GapSeriesResult gaps_from_students(const std::vector<StudentRecord>& records);

/// cycles = conv.steps; years = steps / cycles_per_year, ceiled to one
/// decimal. Requires a converged report.
ClosurePrediction predict_closure(const ConvergenceReport& conv, double cycles_per_year);

/// Runs discretize -> count -> estimate -> equilibrium -> inference over the
/// series, in both estimator mode and published mode. The t-test is present
/// iff student records are supplied.
ReplicationReport replicate(const CycleSeries& series,
                            const std::vector<StudentRecord>* students,
                            const PipelineConfig& config);

/// Canonical JSON rendering (alphabetical keys, full precision); byte-stable
/// for identical inputs.
std::string report_json(const ReplicationReport& report);

/// Human-readable rendering: probabilities and statistics at four decimals,
/// p-values at five.
std::string report_text(const ReplicationReport& report);

}  // namespace gapchain
