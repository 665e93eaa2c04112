#include "gapchain/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gapchain/io.hpp"

namespace gapchain {

namespace {

// Published reference figures this pipeline replicates against.
constexpr double kPublishedChiSquare = 1.731;
constexpr double kPublishedChiSquareP = 0.99924;
constexpr double kPublishedChiSquareCritical = 19.675;
constexpr std::size_t kPublishedEquilibriumPower = 15;
constexpr double kPublishedClosureYears = 8.0;
const std::vector<double> kPublishedLimitRow{0.4997, 0.1669, 0.0835, 0.2499, 0.0};

struct PublishedTTest {
    std::size_t n1 = 923;
    std::size_t n2 = 183;
    std::size_t df = 1104;
    double t_stat = 0.4055;
    double t_crit = 1.9621;
    double p_value = 0.6852;
    double alpha = 0.05;
};

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string fmt_row(const std::vector<double>& row, int decimals) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += ' ';
        out += fmt(row[i], decimals);
    }
    return out;
}

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(std::string("replicate: ") + name + ": " + e.what());
    }
}

nlohmann::json convergence_to_json(const ConvergenceReport& conv) {
    return nlohmann::json{{"converged", conv.converged},
                          {"steps", conv.steps},
                          {"tolerance", conv.tolerance},
                          {"limit", conv.limit.values()},
                          {"final_matrix", matrix_to_json(conv.final_matrix)}};
}

nlohmann::json gof_to_json(const GofResult& gof) {
    return nlohmann::json{{"test", "chi_square_gof"},
                          {"statistic", gof.statistic},
                          {"df", gof.df},
                          {"p_value", gof.p_value},
                          {"critical_value", gof.critical_value},
                          {"alpha", gof.alpha},
                          {"significant", gof.significant},
                          {"expected", gof.expected}};
}

nlohmann::json ttest_to_json(const TTestResult& t) {
    return nlohmann::json{{"test", "pooled_t"},
                          {"statistic", t.t_stat},
                          {"df", t.df},
                          {"p_value", t.p_value},
                          {"critical_value", t.t_crit},
                          {"alpha", t.alpha},
                          {"significant", t.significant},
                          {"n1", t.n1},
                          {"n2", t.n2}};
}

}  // namespace

GapSeriesResult gaps_from_students(const std::vector<StudentRecord>& records) {
    if (records.empty()) throw Error("no student records supplied");

    struct CycleSums {
        double male_sum = 0.0;
        double female_sum = 0.0;
        std::size_t male_n = 0;
        std::size_t female_n = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, CycleSums> sums;
    for (const StudentRecord& rec : records) {
        if (!(rec.cgpa >= 0.0) || rec.cgpa > 5.0) {
            std::ostringstream msg;
            msg << "cycle " << rec.cycle << ": cgpa " << rec.cgpa
                << " outside the 5-point scale";
            throw Error(msg.str());
        }
        auto [it, inserted] = sums.try_emplace(rec.cycle);
        if (inserted) order.push_back(rec.cycle);
        if (rec.gender == Gender::male) {
            it->second.male_sum += rec.cgpa;
            it->second.male_n += 1;
        } else {
            it->second.female_sum += rec.cgpa;
            it->second.female_n += 1;
        }
    }

    GapSeriesResult result;
    std::vector<CycleRecord> cycle_records;
    for (const std::string& cycle : order) {
        const CycleSums& s = sums.at(cycle);
        if (s.male_n == 0 || s.female_n == 0)
            throw Error("cycle " + cycle + " is missing " +
                        (s.male_n == 0 ? std::string("male") : std::string("female")) +
                        " records");
        const double male_mean = s.male_sum / static_cast<double>(s.male_n);
        const double female_mean = s.female_sum / static_cast<double>(s.female_n);
        const double diff = male_mean - female_mean;
        Gender favoured = Gender::male;
        if (female_mean > male_mean) favoured = Gender::female;
        if (male_mean == female_mean)
            result.warnings.push_back("cycle " + cycle +
                                      ": means are equal; favoured tie-broken to male");
        result.unrounded_d.push_back(std::abs(diff));
        cycle_records.push_back({cycle, std::round(std::abs(diff) * 100.0) / 100.0, favoured});
    }
    result.series = CycleSeries(std::move(cycle_records));
    return result;
}

ClosurePrediction predict_closure(const ConvergenceReport& conv, double cycles_per_year) {
    if (!conv.converged) throw Error("closure prediction requires a converged chain");
    if (!(cycles_per_year > 0.0)) throw Error("cycles_per_year must be positive");
    const double raw = static_cast<double>(conv.steps) / cycles_per_year;
    // Ceiling to one decimal; the small slack absorbs division dust.
    const double years = std::ceil(raw * 10.0 - 1e-9) / 10.0;
    return ClosurePrediction{conv.steps, years};
}

ReplicationReport replicate(const CycleSeries& series,
                            const std::vector<StudentRecord>* students,
                            const PipelineConfig& config) {
    if (series.empty()) throw Error("replicate: ingest: series is empty");

    const StateSpace space = default_state_space();
    StateSequence seq = stage("discretize", [&] { return discretize(space, series); });
    if (seq.steps.size() < 2)
        throw Error("replicate: count: insufficient transitions (a single cycle has no "
                    "consecutive pair)");

    TransitionCounts counts = stage("count", [&] { return count_transitions(seq, space); });
    StochasticMatrix estimated = stage(
        "estimate", [&] { return estimate(counts, config.denominator, config.zero_row_policy); });
    StochasticMatrix published = published_matrix();

    auto analyze = [&](const StochasticMatrix& m) {
        ConvergenceReport conv = find_equilibrium(m, config.tolerance, config.max_steps);
        Distribution stationary = stationary_direct(m);
        return MatrixAnalysis{m, std::move(conv), std::move(stationary)};
    };
    MatrixAnalysis estimated_analysis = stage("equilibrium", [&] { return analyze(estimated); });
    MatrixAnalysis published_analysis = stage("equilibrium", [&] { return analyze(published); });

    const std::vector<double> observed = series.d_values();
    double mean = 0.0;
    for (double d : observed) mean += d;
    mean /= static_cast<double>(observed.size());
    GofResult gof = stage("inference", [&] {
        return chi_square_gof(observed, std::vector<double>(observed.size(), mean), config.alpha);
    });

    std::optional<TTestResult> ttest;
    if (students != nullptr) {
        std::vector<double> male, female;
        for (const StudentRecord& rec : *students)
            (rec.gender == Gender::male ? male : female).push_back(rec.cgpa);
        ttest = stage("inference", [&] { return pooled_t_test(male, female, config.alpha); });
    }

    ClosurePrediction closure = stage("closure", [&] {
        return predict_closure(published_analysis.convergence, config.cycles_per_year);
    });

    std::vector<std::string> discrepancies;
    if (estimated.order() == published.order()) {
        for (std::size_t i = 0; i < estimated.order(); ++i) {
            bool differs = false;
            for (std::size_t j = 0; j < estimated.order(); ++j)
                if (std::abs(estimated(i, j) - published(i, j)) > 1e-3) differs = true;
            if (differs)
                discrepancies.push_back("estimated row " + space.state(i).label + " (" +
                                        fmt_row(estimated.row(i), 4) +
                                        ") differs from the published row (" +
                                        fmt_row(published.row(i), 4) + ")");
        }
    } else {
        discrepancies.push_back("estimated matrix order " + std::to_string(estimated.order()) +
                                " differs from the published order " +
                                std::to_string(published.order()));
    }

    if (std::abs(gof.statistic - kPublishedChiSquare) > 5e-4)
        discrepancies.push_back(
            "recomputed chi-square " + fmt(gof.statistic, 4) + " (p " + fmt(gof.p_value, 5) +
            ") differs from the published " + fmt(kPublishedChiSquare, 3) + " (p " +
            fmt(kPublishedChiSquareP, 5) + "); expected gap per cycle taken as the series mean " +
            fmt(mean, 6));

    if (published_analysis.convergence.converged &&
        published_analysis.convergence.steps != kPublishedEquilibriumPower)
        discrepancies.push_back(
            "equilibrium first reached at power " +
            std::to_string(published_analysis.convergence.steps) + " (column spread < " +
            fmt(config.tolerance, 6) + "), giving " + fmt(closure.years, 1) + " years at " +
            fmt(config.cycles_per_year, 1) + " cycles/year; the published analysis reports power " +
            std::to_string(kPublishedEquilibriumPower) + " and " +
            fmt(kPublishedClosureYears, 0) + " years");

    {
        const StochasticMatrix p15 = power(published, kPublishedEquilibriumPower);
        double max_dev = 0.0;
        for (std::size_t i = 0; i < p15.order(); ++i)
            for (std::size_t j = 0; j < p15.order(); ++j)
                max_dev = std::max(max_dev, std::abs(p15(i, j) - kPublishedLimitRow[j]));
        if (max_dev > 5e-5) {
            std::ostringstream msg;
            msg << "power " << kPublishedEquilibriumPower
                << " of the published matrix differs from the published limit row by up to "
                << fmt(max_dev * 1e5, 2) << "e-05 per entry; the published limit row ("
                << fmt_row(kPublishedLimitRow, 4) << ") idealizes all rows as identical";
            discrepancies.push_back(msg.str());
        }
    }

    return ReplicationReport{series,
                             std::move(seq),
                             std::move(counts),
                             std::move(estimated_analysis),
                             std::move(published_analysis),
                             std::move(gof),
                             std::move(ttest),
                             closure,
                             std::move(discrepancies)};
}

std::string report_json(const ReplicationReport& report) {
    nlohmann::json series = nlohmann::json::array();
    for (const CycleRecord& rec : report.series.records())
        series.push_back(
            {{"cycle", rec.cycle}, {"d", rec.d}, {"favoured", to_string(rec.favoured)}});

    nlohmann::json sequence = nlohmann::json::array();
    for (const StateStep& step : report.state_sequence.steps)
        sequence.push_back({{"cycle", step.cycle}, {"state", step.state}});

    nlohmann::json gof = nlohmann::json{
        {"recomputed", gof_to_json(report.gof)},
        {"published_reference",
         {{"statistic", kPublishedChiSquare},
          {"p_value", kPublishedChiSquareP},
          {"critical_value", kPublishedChiSquareCritical}}}};

    nlohmann::json ttest;
    if (report.ttest.has_value()) {
        ttest = nlohmann::json{{"computed", ttest_to_json(*report.ttest)}};
    } else {
        const PublishedTTest ref;
        ttest = nlohmann::json{{"published_reference",
                                {{"n1", ref.n1},
                                 {"n2", ref.n2},
                                 {"df", ref.df},
                                 {"t_stat", ref.t_stat},
                                 {"t_crit", ref.t_crit},
                                 {"p_value", ref.p_value},
                                 {"alpha", ref.alpha}}}};
    }

    nlohmann::json root{
        {"series", series},
        {"state_sequence", sequence},
        {"counts", counts_to_json(report.counts)},
        {"estimated",
         {{"matrix", matrix_to_json(report.estimated.matrix)},
          {"convergence", convergence_to_json(report.estimated.convergence)},
          {"stationary", report.estimated.stationary.values()}}},
        {"published",
         {{"matrix", matrix_to_json(report.published.matrix)},
          {"convergence", convergence_to_json(report.published.convergence)},
          {"stationary", report.published.stationary.values()},
          {"reference_limit_row", kPublishedLimitRow}}},
        {"gof", gof},
        {"ttest", ttest},
        {"closure",
         {{"cycles", report.closure.cycles},
          {"years", report.closure.years},
          {"published_reference",
           {{"cycles", kPublishedEquilibriumPower}, {"years", kPublishedClosureYears}}}}},
        {"discrepancies", report.discrepancies}};
    return root.dump(2) + "\n";
}

std::string report_text(const ReplicationReport& report) {
    std::ostringstream out;
    const std::vector<std::string> labels = [&] {
        std::vector<std::string> ls;
        for (const StateInterval& s : report.counts.space.states()) ls.push_back(s.label);
        return ls;
    }();

    out << "Gap series (" << report.series.size() << " cycles):\n";
    out << "  cycle      d     favoured  state\n";
    for (std::size_t i = 0; i < report.series.size(); ++i) {
        const CycleRecord& rec = report.series[i];
        char line[96];
        std::snprintf(line, sizeof(line), "  %-9s  %.2f  %-8s  %s\n", rec.cycle.c_str(), rec.d,
                      to_string(rec.favoured).c_str(),
                      report.state_sequence.steps[i].state.c_str());
        out << line;
    }

    out << "\nTransition counts (row -> column):\n  state ";
    for (const std::string& l : labels) out << "  " << l;
    out << "  visits  exits\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << "  " << labels[i] << "    ";
        for (std::size_t j = 0; j < labels.size(); ++j)
            out << "  " << report.counts.counts[i][j] << " ";
        out << "      " << report.counts.visits[i] << "      " << report.counts.out_totals[i]
            << "\n";
    }

    auto print_matrix = [&](const StochasticMatrix& m) {
        for (std::size_t i = 0; i < m.order(); ++i)
            out << "  " << labels[i] << "  " << fmt_row(m.row(i), 4) << "\n";
    };
    out << "\nEstimated transition matrix:\n";
    print_matrix(report.estimated.matrix);
    out << "Published transition matrix:\n";
    print_matrix(report.published.matrix);

    auto print_analysis = [&](const char* name, const MatrixAnalysis& a) {
        out << "  " << name << ": ";
        if (a.convergence.converged)
            out << "equilibrium at power " << a.convergence.steps;
        else
            out << "no equilibrium within " << a.convergence.steps << " powers";
        out << " (tolerance " << fmt(a.convergence.tolerance, 6) << ")\n";
        out << "      limit      " << fmt_row(a.convergence.limit.values(), 4) << "\n";
        out << "      stationary " << fmt_row(a.stationary.values(), 4) << "\n";
    };
    out << "\nEquilibrium and stationary distributions:\n";
    print_analysis("estimated", report.estimated);
    print_analysis("published", report.published);
    out << "  published reference limit row: " << fmt_row(kPublishedLimitRow, 4) << "\n";

    out << "\nChi-square goodness of fit (equal-gap null, expected = mean d):\n";
    out << "  statistic " << fmt(report.gof.statistic, 4) << "  df " << report.gof.df
        << "  p-value " << fmt(report.gof.p_value, 5) << "  critical(alpha "
        << fmt(report.gof.alpha, 2) << ") " << fmt(report.gof.critical_value, 4) << "  -> "
        << (report.gof.significant ? "significant" : "not significant") << "\n";
    out << "  published reference: statistic " << fmt(kPublishedChiSquare, 3) << "  p-value "
        << fmt(kPublishedChiSquareP, 5) << "  critical " << fmt(kPublishedChiSquareCritical, 3)
        << "\n";

    out << "\nT-test of exit CGPA by gender:\n";
    if (report.ttest.has_value()) {
        const TTestResult& t = *report.ttest;
        out << "  n " << t.n1 << "/" << t.n2 << "  df " << t.df << "  t " << fmt(t.t_stat, 4)
            << "  t-crit " << fmt(t.t_crit, 4) << "  p-value " << fmt(t.p_value, 5) << "  -> "
            << (t.significant ? "significant" : "not significant") << "\n";
    } else {
        const PublishedTTest ref;
        out << "  published reference (no per-student data supplied): n " << ref.n1 << "/"
            << ref.n2 << "  df " << ref.df << "  t " << fmt(ref.t_stat, 4) << "  t-crit "
            << fmt(ref.t_crit, 4) << "  p-value " << fmt(ref.p_value, 4) << "\n";
    }

    out << "\nClosure prediction: " << report.closure.cycles << " cycles  ~ "
        << fmt(report.closure.years, 1) << " years\n";
    out << "  published reference: " << kPublishedEquilibriumPower
        << " cycles, reported as within the next " << fmt(kPublishedClosureYears, 0)
        << " years\n";

    out << "\nDiscrepancies:\n";
    if (report.discrepancies.empty()) out << "  (none)\n";
    for (const std::string& d : report.discrepancies) out << "  - " << d << "\n";
    return out.str();
}

}  // namespace gapchain
