#include "gapchain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gapchain {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double_field(const std::string& s, const std::string& what, std::size_t line_no) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != s.size() || s.empty()) {
        std::ostringstream msg;
        msg << "line " << line_no << ": cannot parse " << what << " '" << s << "'";
        throw Error(msg.str());
    }
    return value;
}

std::string format_two_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

CycleSeries parse_series_csv(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "cycle,d,favoured")
        throw Error("cycle series CSV must start with header 'cycle,d,favoured'");
    std::vector<CycleRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 3) {
            std::ostringstream msg;
            msg << "line " << i + 1 << ": expected 3 fields, got " << fields.size();
            throw Error(msg.str());
        }
        records.push_back({fields[0], parse_double_field(fields[1], "d", i + 1),
                           gender_from_string(fields[2])});
    }
    return CycleSeries(std::move(records));
}

CycleSeries load_series_csv(const std::string& path) { return parse_series_csv(read_file(path)); }

std::string series_to_csv(const CycleSeries& series) {
    std::ostringstream out;
    out << "cycle,d,favoured\n";
    for (const CycleRecord& rec : series.records())
        out << rec.cycle << ',' << format_two_decimals(rec.d) << ',' << to_string(rec.favoured)
            << '\n';
    return out.str();
}

std::vector<StudentRecord> parse_students_csv(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "cycle,gender,cgpa")
        throw Error("student CSV must start with header 'cycle,gender,cgpa'");
    std::vector<StudentRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 3) {
            std::ostringstream msg;
            msg << "line " << i + 1 << ": expected 3 fields, got " << fields.size();
            throw Error(msg.str());
        }
        const double cgpa = parse_double_field(fields[2], "cgpa", i + 1);
        if (!(cgpa >= 0.0) || cgpa > 5.0) {
            std::ostringstream msg;
            msg << "line " << i + 1 << ": cgpa " << cgpa << " outside the 5-point scale";
            throw Error(msg.str());
        }
        records.push_back({fields[0], gender_from_string(fields[1]), cgpa});
    }
    return records;
}

std::vector<StudentRecord> load_students_csv(const std::string& path) {
    return parse_students_csv(read_file(path));
}

nlohmann::json matrix_to_json(const StochasticMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.order(); ++i) rows.push_back(m.row(i));
    return nlohmann::json{{"order", m.order()}, {"entries", rows}};
}

StochasticMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("entries"))
        throw Error("matrix JSON must be an object with 'order' and 'entries'");
    const auto order = j.at("order").get<std::size_t>();
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != order)
        throw Error("matrix JSON 'entries' must hold one row per state");
    std::vector<double> flat;
    flat.reserve(order * order);
    double worst = 0.0;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != order)
            throw Error("matrix JSON rows must each hold 'order' probabilities");
        double sum = 0.0;
        for (const auto& v : row) {
            flat.push_back(v.get<double>());
            sum += flat.back();
        }
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    // Rounded published sources get the published slack; anything cleaner is strict.
    const bool as_published = worst > StochasticMatrix::kStrictRowTolerance;
    return StochasticMatrix(order, std::move(flat), as_published);
}

StochasticMatrix load_matrix_json(const std::string& path) {
    return matrix_from_json(nlohmann::json::parse(read_file(path)));
}

nlohmann::json distribution_to_json(const Distribution& d) {
    return nlohmann::json{{"probabilities", d.values()}};
}

nlohmann::json state_space_to_json(const StateSpace& space) {
    nlohmann::json out = nlohmann::json::array();
    for (const StateInterval& s : space.states())
        out.push_back({{"label", s.label}, {"lower", s.lower}, {"upper", s.upper}});
    return out;
}

StateSpace state_space_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error("state space JSON must be an array of intervals");
    std::vector<StateInterval> states;
    for (const auto& item : j)
        states.push_back({item.at("label").get<std::string>(), item.at("lower").get<double>(),
                          item.at("upper").get<double>()});
    return StateSpace(std::move(states));
}

nlohmann::json counts_to_json(const TransitionCounts& counts) {
    nlohmann::json labels = nlohmann::json::array();
    for (const StateInterval& s : counts.space.states()) labels.push_back(s.label);
    return nlohmann::json{{"labels", labels},
                          {"counts", counts.counts},
                          {"visits", counts.visits},
                          {"out_totals", counts.out_totals}};
}

std::string trajectory_to_csv(const Trajectory& traj, const std::vector<std::string>& labels) {
    std::ostringstream out;
    out << "# seed=" << traj.seed << "\n";
    out << "step,state_label\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const std::size_t s = traj.states[k];
        out << k << ',' << (s < labels.size() ? labels[s] : "s" + std::to_string(s + 1)) << '\n';
    }
    return out.str();
}

nlohmann::json config_to_json(const PipelineConfig& config) {
    return nlohmann::json{{"denominator", to_string(config.denominator)},
                          {"zero_row_policy", to_string(config.zero_row_policy)},
                          {"tolerance", config.tolerance},
                          {"max_steps", config.max_steps},
                          {"cycles_per_year", config.cycles_per_year},
                          {"alpha", config.alpha}};
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("pipeline config JSON must be an object");
    PipelineConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "denominator")
            config.denominator = denominator_from_string(value.get<std::string>());
        else if (key == "zero_row_policy")
            config.zero_row_policy = zero_row_policy_from_string(value.get<std::string>());
        else if (key == "tolerance")
            config.tolerance = value.get<double>();
        else if (key == "max_steps")
            config.max_steps = value.get<std::size_t>();
        else if (key == "cycles_per_year")
            config.cycles_per_year = value.get<double>();
        else if (key == "alpha")
            config.alpha = value.get<double>();
        else
            throw Error("unknown pipeline config key '" + key + "'");
    }
    return config;
}

PipelineConfig load_config_json(const std::string& path) {
    return config_from_json(nlohmann::json::parse(read_file(path)));
}

}  // namespace gapchain
