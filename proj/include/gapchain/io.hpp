#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gapchain/estimation.hpp"
#include "gapchain/matrix.hpp"
#include "gapchain/pipeline.hpp"
#include "gapchain/simulate.hpp"
#include "gapchain/state_space.hpp"

namespace gapchain {

// Cycle series CSV, header `cycle,d,favoured`, rows like `07/08,0.52,male`.
CycleSeries parse_series_csv(const std::string& text);
CycleSeries load_series_csv(const std::string& path);
std::string series_to_csv(const CycleSeries& series);

// Student records CSV, header `cycle,gender,cgpa`.
std::vector<StudentRecord> parse_students_csv(const std::string& text);
std::vector<StudentRecord> load_students_csv(const std::string& path);

// Matrix JSON: {"order": r, "entries": [[...], ...]}. Loading falls back to
// the published row slack when the rows carry rounded probabilities.
nlohmann::json matrix_to_json(const StochasticMatrix& m);
StochasticMatrix matrix_from_json(const nlohmann::json& j);
StochasticMatrix load_matrix_json(const std::string& path);

// Distribution JSON: {"probabilities": [...]}.
nlohmann::json distribution_to_json(const Distribution& d);

// State space JSON: [{"label", "lower", "upper"}, ...].
nlohmann::json state_space_to_json(const StateSpace& space);
StateSpace state_space_from_json(const nlohmann::json& j);

// Transition counts JSON: {"labels", "counts", "visits", "out_totals"}.
nlohmann::json counts_to_json(const TransitionCounts& counts);

// Trajectory CSV: a `# seed=N` comment line, then `step,state_label` rows.
std::string trajectory_to_csv(const Trajectory& traj, const std::vector<std::string>& labels);

// Pipeline configuration JSON; missing keys keep defaults, unknown keys are
// rejected.
nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config_json(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace gapchain
