#include "gapchain/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include "gapchain/dataset.hpp"
#include "gapchain/estimation.hpp"
#include "gapchain/io.hpp"
#include "gapchain/pipeline.hpp"
#include "gapchain/simulate.hpp"
#include "gapchain/state_space.hpp"
#include "gapchain/stats.hpp"

namespace gapchain::cli {

namespace {

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

std::vector<std::string> generic_labels(std::size_t order) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < order; ++i) labels.push_back("s" + std::to_string(i + 1));
    return labels;
}

// `--matrix <path|paper>`: "paper" injects the published transition matrix.
StochasticMatrix resolve_matrix(const std::string& source) {
    if (source == "paper") return published_matrix();
    return load_matrix_json(source);
}

CycleSeries resolve_series(const std::string& path) {
    if (path.empty()) return bundled_series();
    return load_series_csv(path);
}

void print_matrix(std::ostream& out, const StochasticMatrix& m) {
    const auto labels = generic_labels(m.order());
    for (std::size_t i = 0; i < m.order(); ++i)
        out << labels[i] << "  " << fmt_row(m.row(i), 4) << "\n";
}

void emit_test_report(std::ostream& out, const std::string& test, double statistic,
                      std::size_t df, double p_value, double critical, double alpha,
                      bool significant, bool json_mode) {
    if (json_mode) {
        nlohmann::json j{{"test", test},          {"statistic", statistic},
                         {"df", df},              {"p_value", p_value},
                         {"critical_value", critical}, {"alpha", alpha},
                         {"significant", significant}};
        out << j.dump(2) << "\n";
    } else {
        out << test << ": statistic " << fmt(statistic, 4) << "  df " << df << "  p-value "
            << fmt(p_value, 5) << "  critical(alpha " << fmt(alpha, 2) << ") "
            << fmt(critical, 4) << "  -> " << (significant ? "significant" : "not significant")
            << "\n";
    }
}

struct CommonOptions {
    std::string format = "text";
    bool json() const { return format == "json"; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Markov-chain toolkit for the gender gap in graduation CGPA"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string input;
    std::string matrix_source;
    std::string config_path;
    std::string students_path;
    std::string observed_path;
    std::size_t n = 1;
    std::size_t start = 0;
    std::size_t steps = 1;
    std::uint64_t seed = 0;
    PipelineConfig defaults;
    double tolerance = defaults.tolerance;
    std::size_t max_steps = defaults.max_steps;
    double alpha = defaults.alpha;
    double cycles_per_year = defaults.cycles_per_year;
    std::string denominator = "out_transitions";
    std::string zero_row_policy = "self_loop";

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", common.format, "Output format")
            ->check(CLI::IsMember({"text", "json"}));
    };
    auto add_matrix = [&](CLI::App* cmd) {
        cmd->add_option("--matrix", matrix_source, "Matrix JSON path, or 'paper' for the published matrix")
            ->required();
    };

    CLI::App* discretize_cmd = app.add_subcommand("discretize", "Classify a gap series into states");
    discretize_cmd->add_option("--input", input, "Cycle series CSV (bundled series when omitted)");
    add_format(discretize_cmd);

    CLI::App* estimate_cmd = app.add_subcommand("estimate", "Estimate the transition matrix from a series");
    estimate_cmd->add_option("--input", input, "Cycle series CSV (bundled series when omitted)");
    estimate_cmd->add_option("--denominator", denominator, "Estimator denominator")
        ->check(CLI::IsMember({"out_transitions", "total_visits"}));
    estimate_cmd->add_option("--zero-row-policy", zero_row_policy, "Deficient-row completion")
        ->check(CLI::IsMember({"self_loop", "uniform", "error"}));
    add_format(estimate_cmd);

    CLI::App* power_cmd = app.add_subcommand("power", "Raise a transition matrix to a power");
    add_matrix(power_cmd);
    power_cmd->add_option("--n", n, "Exponent");
    add_format(power_cmd);

    CLI::App* stationary_cmd = app.add_subcommand("stationary", "Stationary distribution by direct solve");
    add_matrix(stationary_cmd);
    add_format(stationary_cmd);

    CLI::App* evolve_cmd = app.add_subcommand("evolve", "Evolve a point-mass start distribution n steps");
    add_matrix(evolve_cmd);
    evolve_cmd->add_option("--start", start, "0-based start state index");
    evolve_cmd->add_option("--n", n, "Number of steps");
    add_format(evolve_cmd);

    CLI::App* gof_cmd = app.add_subcommand("gof", "Chi-square goodness of fit against the equal-gap null");
    gof_cmd->add_option("--observed", observed_path, "Cycle series CSV with the observed gaps");
    gof_cmd->add_option("--input", input, "Alias for --observed");
    gof_cmd->add_option("--alpha", alpha, "Significance level");
    add_format(gof_cmd);

    CLI::App* ttest_cmd = app.add_subcommand("ttest", "Pooled two-sample t-test of CGPA by gender");
    ttest_cmd->add_option("--input", input, "Student records CSV (cycle,gender,cgpa)")->required();
    ttest_cmd->add_option("--alpha", alpha, "Significance level");
    add_format(ttest_cmd);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Sample a trajectory from a chain");
    add_matrix(simulate_cmd);
    simulate_cmd->add_option("--start", start, "0-based start state index");
    simulate_cmd->add_option("--steps", steps, "Number of steps")->required();
    simulate_cmd->add_option("--seed", seed, "Generator seed");
    add_format(simulate_cmd);

    CLI::App* closure_cmd = app.add_subcommand("predict-closure", "Predict the closure cycle of a chain");
    add_matrix(closure_cmd);
    closure_cmd->add_option("--tolerance", tolerance, "Equilibrium column-spread tolerance");
    closure_cmd->add_option("--max-steps", max_steps, "Power search bound");
    closure_cmd->add_option("--cycles-per-year", cycles_per_year, "Graduation cycles per year");
    add_format(closure_cmd);

    CLI::App* replicate_cmd = app.add_subcommand("replicate", "Run the full replication pipeline");
    replicate_cmd->add_option("--input", input, "Cycle series CSV (bundled series when omitted)");
    replicate_cmd->add_option("--students", students_path, "Optional student records CSV for the t-test");
    replicate_cmd->add_option("--config", config_path, "Pipeline config JSON");
    replicate_cmd->add_option("--denominator", denominator, "Estimator denominator")
        ->check(CLI::IsMember({"out_transitions", "total_visits"}));
    replicate_cmd->add_option("--zero-row-policy", zero_row_policy, "Deficient-row completion")
        ->check(CLI::IsMember({"self_loop", "uniform", "error"}));
    replicate_cmd->add_option("--tolerance", tolerance, "Equilibrium column-spread tolerance");
    replicate_cmd->add_option("--max-steps", max_steps, "Power search bound");
    replicate_cmd->add_option("--cycles-per-year", cycles_per_year, "Graduation cycles per year");
    replicate_cmd->add_option("--alpha", alpha, "Significance level");
    add_format(replicate_cmd);

    std::vector<std::string> argv_storage;
    argv_storage.push_back("gapchain");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (discretize_cmd->parsed()) {
            const CycleSeries series = resolve_series(input);
            const StateSpace space = default_state_space();
            const StateSequence seq = discretize(space, series);
            const TransitionCounts counts = count_transitions(seq, space);
            if (common.json()) {
                nlohmann::json steps_json = nlohmann::json::array();
                for (std::size_t i = 0; i < seq.steps.size(); ++i)
                    steps_json.push_back({{"cycle", seq.steps[i].cycle},
                                          {"d", series[i].d},
                                          {"state", seq.steps[i].state}});
                nlohmann::json visits;
                for (std::size_t i = 0; i < space.size(); ++i)
                    visits[space.state(i).label] = counts.visits[i];
                out << nlohmann::json{{"steps", steps_json}, {"visit_totals", visits}}.dump(2)
                    << "\n";
            } else {
                for (std::size_t i = 0; i < seq.steps.size(); ++i)
                    out << seq.steps[i].cycle << "  " << fmt(series[i].d, 2) << "  "
                        << seq.steps[i].state << "\n";
                out << "visits:";
                for (std::size_t i = 0; i < space.size(); ++i)
                    out << " " << space.state(i).label << "=" << counts.visits[i];
                out << "\n";
            }
        } else if (estimate_cmd->parsed()) {
            const CycleSeries series = resolve_series(input);
            const StateSpace space = default_state_space();
            const TransitionCounts counts = count_transitions(discretize(space, series), space);
            const StochasticMatrix m = estimate(counts, denominator_from_string(denominator),
                                                zero_row_policy_from_string(zero_row_policy));
            if (common.json()) {
                out << nlohmann::json{{"counts", counts_to_json(counts)},
                                      {"matrix", matrix_to_json(m)}}
                           .dump(2)
                    << "\n";
            } else {
                print_matrix(out, m);
            }
        } else if (power_cmd->parsed()) {
            const StochasticMatrix m = power(resolve_matrix(matrix_source), n);
            if (common.json())
                out << matrix_to_json(m).dump(2) << "\n";
            else
                print_matrix(out, m);
        } else if (stationary_cmd->parsed()) {
            const Distribution pi = stationary_direct(resolve_matrix(matrix_source));
            if (common.json())
                out << distribution_to_json(pi).dump(2) << "\n";
            else
                out << fmt_row(pi.values(), 4) << "\n";
        } else if (evolve_cmd->parsed()) {
            const StochasticMatrix m = resolve_matrix(matrix_source);
            if (start >= m.order()) {
                throw Error("start state " + std::to_string(start) + " out of range for order " +
                            std::to_string(m.order()));
            }
            std::vector<double> delta(m.order(), 0.0);
            delta[start] = 1.0;
            const Distribution result = evolve(Distribution(delta), m, n);
            if (common.json())
                out << distribution_to_json(result).dump(2) << "\n";
            else
                out << fmt_row(result.values(), 4) << "\n";
        } else if (gof_cmd->parsed()) {
            const std::string path = observed_path.empty() ? input : observed_path;
            const CycleSeries series = resolve_series(path);
            const std::vector<double> observed = series.d_values();
            double mean = 0.0;
            for (double d : observed) mean += d;
            mean /= static_cast<double>(observed.size());
            const GofResult gof =
                chi_square_gof(observed, std::vector<double>(observed.size(), mean), alpha);
            emit_test_report(out, "chi_square_gof", gof.statistic, gof.df, gof.p_value,
                             gof.critical_value, gof.alpha, gof.significant, common.json());
        } else if (ttest_cmd->parsed()) {
            std::vector<double> male, female;
            for (const StudentRecord& rec : load_students_csv(input))
                (rec.gender == Gender::male ? male : female).push_back(rec.cgpa);
            const TTestResult t = pooled_t_test(male, female, alpha);
            emit_test_report(out, "pooled_t", t.t_stat, t.df, t.p_value, t.t_crit, t.alpha,
                             t.significant, common.json());
        } else if (simulate_cmd->parsed()) {
            const StochasticMatrix m = resolve_matrix(matrix_source);
            const Trajectory traj = simulate(m, start, steps, seed);
            if (common.json()) {
                out << nlohmann::json{{"seed", traj.seed}, {"states", traj.states}}.dump(2)
                    << "\n";
            } else {
                out << trajectory_to_csv(traj, generic_labels(m.order()));
            }
        } else if (closure_cmd->parsed()) {
            const StochasticMatrix m = resolve_matrix(matrix_source);
            const ConvergenceReport conv = find_equilibrium(m, tolerance, max_steps);
            const ClosurePrediction prediction = predict_closure(conv, cycles_per_year);
            if (common.json()) {
                out << nlohmann::json{{"cycles", prediction.cycles},
                                      {"years", prediction.years},
                                      {"tolerance", tolerance},
                                      {"cycles_per_year", cycles_per_year}}
                           .dump(2)
                    << "\n";
            } else {
                out << "closure after " << prediction.cycles << " cycles ~ "
                    << fmt(prediction.years, 1) << " years at " << fmt(cycles_per_year, 1)
                    << " cycles per year\n";
            }
        } else if (replicate_cmd->parsed()) {
            PipelineConfig config;
            if (!config_path.empty()) config = load_config_json(config_path);
            if (replicate_cmd->count("--denominator") > 0)
                config.denominator = denominator_from_string(denominator);
            if (replicate_cmd->count("--zero-row-policy") > 0)
                config.zero_row_policy = zero_row_policy_from_string(zero_row_policy);
            if (replicate_cmd->count("--tolerance") > 0) config.tolerance = tolerance;
            if (replicate_cmd->count("--max-steps") > 0) config.max_steps = max_steps;
            if (replicate_cmd->count("--cycles-per-year") > 0)
                config.cycles_per_year = cycles_per_year;
            if (replicate_cmd->count("--alpha") > 0) config.alpha = alpha;

            const CycleSeries series = resolve_series(input);
            std::vector<StudentRecord> students;
            const bool have_students = !students_path.empty();
            if (have_students) students = load_students_csv(students_path);
            const ReplicationReport report =
                replicate(series, have_students ? &students : nullptr, config);
            out << (common.json() ? report_json(report) : report_text(report));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace gapchain::cli
