// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Run with no arguments for all criteria, or pass criterion numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapchain/dataset.hpp"
#include "gapchain/estimation.hpp"
#include "gapchain/io.hpp"
#include "gapchain/matrix.hpp"
#include "gapchain/pipeline.hpp"
#include "gapchain/simulate.hpp"
#include "gapchain/state_space.hpp"
#include "gapchain/stats.hpp"

using namespace gapchain;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& label) {
        if (!ok) pass = false;
        notes.push_back(label + (ok ? " ok" : " FAILED"));
    }
    void note(const std::string& text) { notes.push_back(text); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

const std::vector<double> kLimitRow{0.4997, 0.1669, 0.0835, 0.2499, 0.0};

bool mentions(const std::vector<std::string>& messages, const std::string& needle) {
    for (const std::string& m : messages)
        if (m.find(needle) != std::string::npos) return true;
    return false;
}

// -- criterion 1: fixture fidelity ------------------------------------------

Outcome criterion1() {
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();

    const CycleSeries series =
        load_series_csv(std::string(GAPCHAIN_SOURCE_DIR) + "/data/gap_series.csv");
    struct Row {
        const char* cycle;
        double d;
        Gender favoured;
    };
    const std::vector<Row> expected{
        {"07/08", 0.52, Gender::male},    {"08/09", 0.06, Gender::male},
        {"09/10", 0.14, Gender::male},    {"10/11", 0.06, Gender::male},
        {"11/12/A", 0.08, Gender::female}, {"11/12/B", 0.36, Gender::female},
        {"12/13/A", 0.08, Gender::male},  {"12/13/B", 0.04, Gender::male},
        {"13/14/A", 0.29, Gender::female}, {"13/14/B", 0.10, Gender::female},
        {"14/15/A", 0.35, Gender::male},  {"14/15/B", 0.01, Gender::female}};
    bool rows_ok = series.size() == expected.size();
    for (std::size_t i = 0; rows_ok && i < expected.size(); ++i)
        rows_ok = series[i].cycle == expected[i].cycle && series[i].d == expected[i].d &&
                  series[i].favoured == expected[i].favoured;
    outcome.require(rows_ok, "12 fixture rows exact");

    const StateSpace space = default_state_space();
    const TransitionCounts counts = count_transitions(discretize(space, series), space);
    outcome.require(counts.visits == std::vector<std::int64_t>{6, 2, 1, 2, 1},
                    "visit totals (6,2,1,2,1)");

    const double elapsed = seconds_since(t0);
    outcome.require(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + "s < 1s");
    return outcome;
}

// -- criterion 2: estimation rows and the flagged divergence ----------------

Outcome criterion2() {
    Outcome outcome;
    const StateSpace space = default_state_space();
    const CycleSeries series = bundled_series();
    const TransitionCounts counts = count_transitions(discretize(space, series), space);
    const StochasticMatrix m =
        estimate(counts, Denominator::out_transitions, ZeroRowPolicy::self_loop);
    const StochasticMatrix p = published_matrix();

    bool tail_rows_exact = true;
    for (std::size_t i = 1; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            if (m(i, j) != p(i, j)) tail_rows_exact = false;
    outcome.require(tail_rows_exact, "rows s2..s5 reproduce the published rows exactly");

    outcome.require(m(0, 0) == 0.4 && m(0, 1) == 0.2 && m(0, 2) == 0.2 && m(0, 3) == 0.2 &&
                        m(0, 4) == 0.0,
                    "row s1 = (0.4, 0.2, 0.2, 0.2, 0) from the hand-enumerated pairs");

    const ReplicationReport report = replicate(series, nullptr, PipelineConfig{});
    outcome.require(mentions(report.discrepancies, "row s1"),
                    "report flags the row-s1 divergence");
    return outcome;
}

// -- criterion 3: equilibrium replication ------------------------------------

Outcome criterion3() {
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    const StochasticMatrix p = published_matrix();

    const StochasticMatrix p15 = power(p, 15);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            max_dev = std::max(max_dev, std::abs(p15(i, j) - kLimitRow[j]));
    outcome.require(max_dev < 5e-5, "every row of power 15 within 5e-5 of the published row "
                                    "(measured max deviation " +
                                        fmt(max_dev * 1e5, 3) + "e-5)");

    const Distribution pi = stationary_direct(p);
    double stat_dev = 0.0;
    for (std::size_t j = 0; j < 5; ++j) stat_dev = std::max(stat_dev, std::abs(pi[j] - kLimitRow[j]));
    outcome.require(stat_dev < 1e-4,
                    "stationary solve within 1e-4 (measured " + fmt(stat_dev * 1e5, 2) + "e-5)");

    // Brute-force oracle for the first power meeting the column-spread criterion.
    std::size_t oracle_n = 0;
    StochasticMatrix acc = p;
    for (std::size_t n = 1; n <= 100 && oracle_n == 0; ++n) {
        if (n > 1) acc = multiply(acc, p);
        double spread = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            double lo = acc(0, j), hi = acc(0, j);
            for (std::size_t i = 1; i < 5; ++i) {
                lo = std::min(lo, acc(i, j));
                hi = std::max(hi, acc(i, j));
            }
            spread = std::max(spread, hi - lo);
        }
        if (spread < 1e-4) oracle_n = n;
    }
    const ConvergenceReport conv = find_equilibrium(p, 1e-4, 100);
    outcome.require(conv.converged && conv.steps == oracle_n,
                    "equilibrium at the oracle-confirmed power " + std::to_string(oracle_n) +
                        " (published: 15)");

    const double elapsed = seconds_since(t0);
    outcome.require(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + "s < 1s");
    return outcome;
}

// -- criterion 4: inference engine -------------------------------------------

Outcome criterion4(bool quiet = false) {
    Outcome outcome;

    outcome.require(std::abs(chi_square_upper_p(1.731, 11) - 0.99924) < 5e-4,
                    "chi-square p(1.731, 11) = 0.99924 +- 5e-4");
    outcome.require(std::abs(chi_square_critical(0.05, 11) - 19.675) < 5e-3,
                    "chi-square critical(0.05, 11) = 19.675 +- 5e-3");
    outcome.require(std::abs(student_t_two_tailed_p(0.4055, 1104) - 0.6852) < 5e-4,
                    "t p(0.4055, 1104) = 0.6852 +- 5e-4");
    outcome.require(std::abs(student_t_critical(0.05, 1104) - 1.9621) < 1e-3,
                    "t critical(0.05, 1104) = 1.9621 +- 1e-3");
    if (quiet) return outcome;

    // Recompute the series statistic under the equal-gap expectation and make
    // sure the report carries both it and the published 1.731, flagged.
    const CycleSeries series = bundled_series();
    const std::vector<double> observed = series.d_values();
    double mean = 0.0;
    for (double d : observed) mean += d;
    mean /= static_cast<double>(observed.size());
    double brute = 0.0;
    for (double d : observed) brute += (d - mean) * (d - mean) / mean;

    const ReplicationReport report = replicate(series, nullptr, PipelineConfig{});
    outcome.require(std::abs(report.gof.statistic - brute) < 1e-12,
                    "recomputed statistic " + fmt(brute, 4) + " matches the brute-force sum");
    const nlohmann::json j = nlohmann::json::parse(report_json(report));
    const bool both_present =
        j.at("gof").at("recomputed").at("statistic").get<double>() == report.gof.statistic &&
        j.at("gof").at("published_reference").at("statistic").get<double>() == 1.731;
    outcome.require(both_present, "report prints both the recomputed and the cited statistic");
    outcome.require(mentions(report.discrepancies, "chi-square"),
                    "gap to the cited 1.731 flagged");
    return outcome;
}

// -- criterion 5: property suites ---------------------------------------------

StochasticMatrix random_matrix(SplitMix64& rng, std::size_t order) {
    std::vector<double> entries(order * order);
    for (std::size_t i = 0; i < order; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < order; ++j) {
            entries[i * order + j] = 0.05 + rng.next_double();
            sum += entries[i * order + j];
        }
        for (std::size_t j = 0; j < order; ++j) entries[i * order + j] /= sum;
    }
    return StochasticMatrix(order, std::move(entries));
}

Outcome criterion5() {
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();

    {
        SplitMix64 rng(9001);
        bool closure_ok = true, exponent_ok = true, fixed_point_ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t order = 2 + trial % 5;
            const StochasticMatrix a = random_matrix(rng, order);
            const StochasticMatrix b = random_matrix(rng, order);
            const StochasticMatrix ab = multiply(a, b);
            for (std::size_t i = 0; i < order; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < order; ++j) sum += ab(i, j);
                if (std::abs(sum - 1.0) > 1e-9) closure_ok = false;
            }

            const StochasticMatrix lhs = power(a, 13);
            const StochasticMatrix rhs = multiply(power(a, 6), power(a, 7));
            for (std::size_t i = 0; i < order; ++i)
                for (std::size_t j = 0; j < order; ++j)
                    if (std::abs(lhs(i, j) - rhs(i, j)) > 1e-10) exponent_ok = false;

            const Distribution pi = stationary_direct(a);
            double sum_pi = 0.0;
            for (std::size_t j = 0; j < order; ++j) {
                double moved = 0.0;
                for (std::size_t i = 0; i < order; ++i) moved += pi[i] * a(i, j);
                if (std::abs(moved - pi[j]) > 1e-9) fixed_point_ok = false;
                sum_pi += pi[j];
            }
            if (std::abs(sum_pi - 1.0) > 1e-12) fixed_point_ok = false;
        }
        outcome.require(closure_ok, "row-stochasticity closure (1e-9)");
        outcome.require(exponent_ok, "exponent law (1e-10)");
        outcome.require(fixed_point_ok, "stationary fixed-point residual (1e-9)");
    }

    {
        // Strictly decreasing wherever doubles can represent the decrease; the
        // deep left tail saturates at exactly 1.0 for large df.
        bool monotone_ok = true;
        for (std::size_t df : {1, 11, 100}) {
            const double hi = 3.0 * static_cast<double>(df) + 10.0;
            const double step = hi / 100.0;
            double last = 2.0;
            for (double x = 0.0; x <= hi; x += step) {
                const double p = chi_square_upper_p(x, df);
                if (p > last || (p < 1.0 && last <= 1.0 && !(p < last))) monotone_ok = false;
                last = p;
            }
            if (!(last < 1.0)) monotone_ok = false;
        }
        double last = 2.0;
        for (double t = 0.0; t <= 8.0; t += 0.2) {
            const double p = student_t_two_tailed_p(t, 17);
            if (p > last || (p < 1.0 && last <= 1.0 && !(p < last))) monotone_ok = false;
            last = p;
        }
        outcome.require(monotone_ok, "tail monotonicity");

        bool invert_ok = true;
        for (const auto& [x, df] : std::vector<std::pair<double, std::size_t>>{
                 {0.1, 1}, {100.0, 1}, {5.0, 11}, {20.0, 11}, {150.0, 100}, {1900.0, 2000}}) {
            const double back = chi_square_critical(chi_square_upper_p(x, df), df);
            if (std::abs(back - x) > 1e-6 * x) invert_ok = false;
        }
        outcome.require(invert_ok, "inverse round-trips (1e-6 relative)");
    }

    {
        const StochasticMatrix truth = StochasticMatrix::from_rows({{0.1, 0.4, 0.3, 0.2},
                                                                    {0.25, 0.25, 0.25, 0.25},
                                                                    {0.5, 0.1, 0.2, 0.2},
                                                                    {0.3, 0.3, 0.2, 0.2}});
        const Trajectory traj = simulate(truth, 0, 100000, 11);
        const StateSpace space(
            {{"q1", 0.0, 1.0}, {"q2", 1.0, 2.0}, {"q3", 2.0, 3.0}, {"q4", 3.0, 4.0}});
        StateSequence seq;
        for (std::size_t k = 0; k < traj.states.size(); ++k)
            seq.steps.push_back({std::to_string(k), space.state(traj.states[k]).label});
        const StochasticMatrix recovered = estimate(
            count_transitions(seq, space), Denominator::out_transitions, ZeroRowPolicy::error);
        double max_err = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                max_err = std::max(max_err, std::abs(recovered(i, j) - truth(i, j)));
        outcome.require(max_err < 0.01, "estimator consistency at 100k steps (max err " +
                                            fmt(max_err, 4) + " < 0.01)");

        const Distribution pi = stationary_direct(truth);
        const Distribution occ = occupancy(simulate(truth, 2, 200000, 77), 4);
        double occ_err = 0.0;
        for (std::size_t j = 0; j < 4; ++j) occ_err = std::max(occ_err, std::abs(occ[j] - pi[j]));

        const Distribution pub_occ = occupancy(simulate(published_matrix(), 0, 200000, 42), 5);
        for (std::size_t j = 0; j < 5; ++j)
            occ_err = std::max(occ_err, std::abs(pub_occ[j] - kLimitRow[j]));
        outcome.require(occ_err < 0.01, "occupancy vs stationary at 200k steps (max err " +
                                            fmt(occ_err, 4) + " < 0.01)");
    }

    const double elapsed = seconds_since(t0);
    outcome.require(elapsed < 60.0, "runtime " + fmt(elapsed, 2) + "s < 60s");
    return outcome;
}

// -- criterion 6: excluded raw-data statistic ---------------------------------

Outcome criterion6() {
    Outcome outcome;
    // The published t statistic (0.4055 over 923/183 CGPAs) cannot be recomputed
    // here: the per-student records were never published. The accepted substitute
    // is the statistic-to-p mapping and the critical values, checked above.
    const Outcome substitute = criterion4(/*quiet=*/true);
    outcome.require(substitute.pass,
                    "excluded by design; substitute statistic-to-p and critical-value checks");
    return outcome;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    const std::vector<std::pair<int, Outcome (*)()>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3},
        {4, +[] { return criterion4(false); }}, {5, criterion5}, {6, criterion6}};

    bool all_pass = true;
    for (const auto& [id, fn] : criteria) {
        if (!selected.empty() && selected.count(id) == 0) continue;
        Outcome outcome;
        try {
            outcome = fn();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.notes.push_back(std::string("exception: ") + e.what());
        }
        std::ostringstream line;
        line << (outcome.pass ? "PASS" : "FAIL") << " criterion " << id << ":";
        for (std::size_t k = 0; k < outcome.notes.size(); ++k)
            line << (k == 0 ? " " : "; ") << outcome.notes[k];
        std::cout << line.str() << "\n";
        if (!outcome.pass) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
