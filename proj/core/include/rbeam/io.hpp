#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rbeam/beamformers.hpp"
#include "rbeam/experiment.hpp"
#include "rbeam/scenario.hpp"

namespace rbeam {

// Whole-file text helpers; IoError on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Multichannel 32-bit float RIFF/WAVE. `signals` is channels x samples, the
// layout the renderer produces; samples are interleaved on disk. The reader
// accepts only files in the same format.
void write_wav(const std::string& path, const Eigen::MatrixXd& signals,
               int sample_rate);
Eigen::MatrixXd read_wav(const std::string& path, int* sample_rate = nullptr);

// Square complex matrix round trip: {"dim": n, "re": [...], "im": [...]}
// with both parts flattened row-major.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

// Beam pattern export: CSV rows theta_deg,power,power_db plus a JSON mirror
// carrying the beamformer and mean labels.
void write_pattern_csv(const std::string& path, const BeamPattern& pattern);
nlohmann::json pattern_to_json(const BeamPattern& pattern);

// Per-trial experiment rows and sweep aggregates, as JSON and CSV with the
// column sets documented in the README.
nlohmann::json metrics_to_json(const std::vector<MetricRow>& rows);
void write_metrics_csv(const std::string& path,
                       const std::vector<MetricRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);

// Configuration files: .toml is lowered onto JSON, .json is parsed directly.
nlohmann::json load_config(const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace rbeam
