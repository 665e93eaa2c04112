#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapchain/dataset.hpp"
#include "gapchain/pipeline.hpp"

using namespace gapchain;

namespace {

bool any_mentions(const std::vector<std::string>& messages, const std::string& needle) {
    for (const std::string& m : messages)
        if (m.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("gaps_from_students averages per cycle and rounds to two decimals") {
    const std::vector<StudentRecord> records{{"c1", Gender::male, 3.5},
                                             {"c1", Gender::male, 3.5},
                                             {"c1", Gender::female, 3.44}};
    const GapSeriesResult result = gaps_from_students(records);
    REQUIRE(result.series.size() == 1);
    CHECK(result.series[0].d == 0.06);
    CHECK(result.series[0].favoured == Gender::male);
    CHECK(result.unrounded_d[0] == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(result.warnings.empty());
}

TEST_CASE("gaps_from_students tie-breaks equal means to male with a warning") {
    const std::vector<StudentRecord> records{{"c1", Gender::male, 3.0},
                                             {"c1", Gender::female, 3.0}};
    const GapSeriesResult result = gaps_from_students(records);
    CHECK(result.series[0].d == 0.0);
    CHECK(result.series[0].favoured == Gender::male);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("c1") != std::string::npos);
}

TEST_CASE("gaps_from_students keeps first-encounter cycle order") {
    const std::vector<StudentRecord> records{{"b", Gender::male, 3.2},
                                             {"b", Gender::female, 3.0},
                                             {"a", Gender::female, 3.5},
                                             {"a", Gender::male, 3.1}};
    const GapSeriesResult result = gaps_from_students(records);
    REQUIRE(result.series.size() == 2);
    CHECK(result.series[0].cycle == "b");
    CHECK(result.series[1].cycle == "a");
    CHECK(result.series[1].favoured == Gender::female);
    CHECK(result.series[1].d == 0.4);
}

TEST_CASE("gaps_from_students requires both genders per cycle") {
    const std::vector<StudentRecord> records{{"c1", Gender::male, 3.0}};
    try {
        gaps_from_students(records);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("c1") != std::string::npos);
    }
    CHECK_THROWS_AS(gaps_from_students({}), Error);
    CHECK_THROWS_AS(gaps_from_students({{"c1", Gender::male, 6.0}}), Error);
}

TEST_CASE("predict_closure ceils years to one decimal") {
    auto conv = [](std::size_t steps) {
        return ConvergenceReport{true, steps, 1e-4, Distribution({1.0}),
                                 StochasticMatrix::identity(1)};
    };
    CHECK(predict_closure(conv(15), 2.0).cycles == 15);
    CHECK(predict_closure(conv(15), 2.0).years == 7.5);  // published rounding reads this as 8
    CHECK(predict_closure(conv(2), 2.0).years == 1.0);
    CHECK(predict_closure(conv(15), 1.0).years == 15.0);
    CHECK(predict_closure(conv(14), 3.0).years == 4.7);

    ConvergenceReport not_converged{false, 50, 1e-4, Distribution({1.0}),
                                    StochasticMatrix::identity(1)};
    CHECK_THROWS_AS(predict_closure(not_converged, 2.0), Error);
    CHECK_THROWS_AS(predict_closure(conv(15), 0.0), Error);
}

TEST_CASE("replicate reproduces the published analysis end to end") {
    const ReplicationReport report = replicate(bundled_series(), nullptr, PipelineConfig{});

    // published-mode convergence at the oracle-confirmed power
    CHECK(report.published.convergence.converged);
    CHECK(report.published.convergence.steps == 14);
    const std::vector<double> limit{0.4997, 0.1669, 0.0835, 0.2499, 0.0};
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(std::abs(report.published.stationary[j] - limit[j]) < 1e-4);
        CHECK(std::abs(report.published.convergence.limit[j] - limit[j]) < 1e-4);
    }

    // estimated-mode stationary, solved by hand: (1/2, 1/5, 1/10, 1/5, 0)
    CHECK(report.estimated.stationary[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.estimated.stationary[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.estimated.stationary[2] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(report.estimated.stationary[3] == doctest::Approx(0.2).epsilon(1e-12));

    CHECK(report.gof.statistic == doctest::Approx(1.6874162679425841).epsilon(1e-12));
    CHECK_FALSE(report.ttest.has_value());
    CHECK(report.closure.cycles == 14);
    CHECK(report.closure.years == 7.0);

    // the row-s1 divergence must be flagged, never silently reconciled
    CHECK(any_mentions(report.discrepancies, "row s1"));
    CHECK(any_mentions(report.discrepancies, "chi-square"));
}

TEST_CASE("replicate carries the t-test when student records are supplied") {
    std::vector<StudentRecord> students;
    for (int i = 0; i < 6; ++i) students.push_back({"c1", Gender::male, 3.0 + 0.1 * i});
    for (int i = 0; i < 5; ++i) students.push_back({"c1", Gender::female, 3.1 + 0.1 * i});
    const ReplicationReport report = replicate(bundled_series(), &students, PipelineConfig{});
    REQUIRE(report.ttest.has_value());
    CHECK(report.ttest->n1 == 6);
    CHECK(report.ttest->n2 == 5);
    CHECK(report.ttest->df == 9);
}

TEST_CASE("replicate rejects series without transitions") {
    const CycleSeries single({{"only", 0.05, Gender::male}});
    CHECK_THROWS_WITH_AS(
        replicate(single, nullptr, PipelineConfig{}),
        "replicate: count: insufficient transitions (a single cycle has no consecutive pair)",
        Error);
    CHECK_THROWS_AS(replicate(CycleSeries(), nullptr, PipelineConfig{}), Error);
}

TEST_CASE("replicate wraps stage errors with context") {
    const CycleSeries bad({{"a", 0.05, Gender::male}, {"b", 0.45, Gender::male}});
    try {
        replicate(bad, nullptr, PipelineConfig{});
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("replicate: discretize:") != std::string::npos);
        CHECK(what.find("b") != std::string::npos);
    }
}

TEST_CASE("report JSON is byte-identical across runs") {
    const ReplicationReport a = replicate(bundled_series(), nullptr, PipelineConfig{});
    const ReplicationReport b = replicate(bundled_series(), nullptr, PipelineConfig{});
    CHECK(report_json(a) == report_json(b));
}

TEST_CASE("published-mode results do not depend on the estimator mode") {
    PipelineConfig by_exits;
    PipelineConfig by_visits;
    by_visits.denominator = Denominator::total_visits;
    const nlohmann::json a = nlohmann::json::parse(
        report_json(replicate(bundled_series(), nullptr, by_exits)));
    const nlohmann::json b = nlohmann::json::parse(
        report_json(replicate(bundled_series(), nullptr, by_visits)));
    CHECK(a.at("published") == b.at("published"));
    CHECK(a.at("estimated") != b.at("estimated"));
}

TEST_CASE("report JSON carries every published claim exactly once") {
    const std::string json_text = report_json(replicate(bundled_series(), nullptr, PipelineConfig{}));
    const nlohmann::json j = nlohmann::json::parse(json_text);

    CHECK(j.at("published").at("matrix").at("entries")[0] ==
          nlohmann::json({0.333, 0.167, 0.167, 0.333, 0.0}));
    CHECK(j.at("published").at("reference_limit_row") ==
          nlohmann::json({0.4997, 0.1669, 0.0835, 0.2499, 0.0}));
    CHECK(j.at("gof").at("published_reference").at("statistic") == 1.731);
    CHECK(j.at("gof").at("published_reference").at("p_value") == 0.99924);
    CHECK(j.at("gof").at("published_reference").at("critical_value") == 19.675);
    CHECK(j.at("gof").at("recomputed").at("df") == 11);
    CHECK(j.at("ttest").at("published_reference").at("n1") == 923);
    CHECK(j.at("ttest").at("published_reference").at("n2") == 183);
    CHECK(j.at("ttest").at("published_reference").at("t_stat") == 0.4055);
    CHECK(j.at("ttest").at("published_reference").at("p_value") == 0.6852);
    CHECK(j.at("closure").at("cycles") == 14);
    CHECK(j.at("closure").at("published_reference").at("cycles") == 15);
    CHECK(j.at("closure").at("published_reference").at("years") == 8.0);
    CHECK(j.at("discrepancies").is_array());
    CHECK_FALSE(j.at("discrepancies").empty());
}

TEST_CASE("report text carries the headline numbers") {
    const std::string text = report_text(replicate(bundled_series(), nullptr, PipelineConfig{}));
    CHECK(text.find("1.6874") != std::string::npos);
    CHECK(text.find("1.731") != std::string::npos);
    CHECK(text.find("19.675") != std::string::npos);
    CHECK(text.find("0.4055") != std::string::npos);
    CHECK(text.find("14 cycles") != std::string::npos);
    CHECK(text.find("0.4997 0.1669 0.0835 0.2499") != std::string::npos);
}
