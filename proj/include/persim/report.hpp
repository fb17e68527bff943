#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "persim/experiment.hpp"

namespace persim {

inline constexpr char kVersion[] = "0.1.0";

// Stable per-p series file: header "t,P_mean,P_stderr,absM_mean,
// ret_kurtosis_running", one row per step, >= 9 significant digits.
std::string series_csv(const PSweepResult& sweep);

struct SeriesData {
    std::vector<double> t;
    std::vector<double> p_mean;
    std::vector<double> p_stderr;
    std::vector<double> abs_m_mean;
    std::vector<double> kurtosis_running;
};

SeriesData read_series_csv(std::istream& in);

nlohmann::json config_to_json(const ExperimentConfig& config);

// Parses the documented schema.  Unknown keys are rejected.  A "preset"
// key loads a named preset first; any other keys then override it.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig parse_config(std::istream& in);

nlohmann::json fit_to_json(const DecayFit& fit);
nlohmann::json comparison_to_json(const ModelComparison& cmp);

// Run manifest: config echo, RNG algorithm, timestamps, output paths,
// per-sample seeds and fit summaries.
nlohmann::json manifest_json(const AggregateResult& result,
                             const std::vector<std::string>& output_files,
                             const std::string& started_at,
                             const std::string& finished_at);

// Companion gnuplot script for the written series files (text convenience,
// no plotting dependency).
std::string gnuplot_script(const AggregateResult& result,
                           const std::vector<std::string>& csv_files);

std::string iso8601_now();

}  // namespace persim
