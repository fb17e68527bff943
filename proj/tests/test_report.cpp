#include <doctest.h>

#include <cmath>
#include <sstream>

#include "persim/report.hpp"

using namespace persim;

namespace {

ExperimentConfig sample_config() {
    ExperimentConfig c;
    c.dimension = 3;
    c.linear_size = 11;
    c.alpha = 4.0;
    c.temperature = 2.5;
    c.p_values = {0.1, 0.25, 0.5};
    c.samples = 12;
    c.t_max = 40;
    c.schedule = Schedule::random_sequential;
    c.master_seed = 987654321;
    c.tail_window = 6;
    c.fixed_bonds = true;
    c.exp_window = {1.0, 20.0};
    return c;
}

}  // namespace

TEST_CASE("config serialization round-trips") {
    const ExperimentConfig c = sample_config();
    const ExperimentConfig back = config_from_json(config_to_json(c));
    CHECK(back == c);

    const ExperimentConfig d3 = preset("d3");
    CHECK(config_from_json(config_to_json(d3)) == d3);
}

TEST_CASE("preset key expands to published parameters") {
    const auto c = config_from_json({{"preset", "d3"}});
    CHECK(c.dimension == 3);
    CHECK(c.linear_size == 151);
    CHECK(c.temperature == 2.5);
    CHECK(c.alpha == 4.0);

    // overrides apply on top of the preset
    const auto small = config_from_json({{"preset", "d3"}, {"samples", 5},
                                         {"paper_grade", false}});
    CHECK(small.samples == 5);
    CHECK(small.linear_size == 151);
}

TEST_CASE("unknown and malformed keys are rejected with context") {
    CHECK_THROWS_WITH_AS(config_from_json({{"preset", "d3"}, {"lenght", 7}}),
                         doctest::Contains("lenght"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        config_from_json(
            {{"dimension", 2}, {"length", 100}, {"temperature", 3.0}}),
        doctest::Contains("odd"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"dimension", 2}}),
                    std::invalid_argument);  // missing keys
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()),
                    std::invalid_argument);
    std::istringstream bad("{not json");
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
}

TEST_CASE("omitted schedule defaults to synchronous") {
    const auto c = config_from_json(
        {{"dimension", 2}, {"length", 11}, {"temperature", 3.0},
         {"p_values", {0.5}}});
    CHECK(c.schedule == Schedule::synchronous);
    CHECK(config_to_json(c).at("schedule") == "synchronous");  // echoed
}

TEST_CASE("series CSV round-trips at 9+ significant digits") {
    PSweepResult sweep;
    sweep.p = 0.1;
    sweep.t = {0, 1, 2};
    sweep.p_mean = {1.0, 0.123456789123, 0.0321098765432};
    sweep.p_stderr = {0.0, 0.001234567891, 0.0009876543211};
    sweep.abs_m_mean = {0.5, 0.25, 0.125};
    sweep.kurtosis_running = {std::nan(""), 1.5, 2.25};

    const std::string csv = series_csv(sweep);
    CHECK(csv.rfind("t,P_mean,P_stderr,absM_mean,ret_kurtosis_running\n", 0) ==
          0);
    std::istringstream in(csv);
    const SeriesData data = read_series_csv(in);
    REQUIRE(data.t.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(data.t[i] == sweep.t[i]);
        CHECK(data.p_mean[i] ==
              doctest::Approx(sweep.p_mean[i]).epsilon(1e-9));
        CHECK(data.p_stderr[i] ==
              doctest::Approx(sweep.p_stderr[i]).epsilon(1e-9));
    }
    CHECK(std::isnan(data.kurtosis_running[0]));
    CHECK(data.kurtosis_running[2] == 2.25);

    std::istringstream bad("wrong,header\n");
    CHECK_THROWS(read_series_csv(bad));
}

TEST_CASE("manifest lists outputs and echoes a round-trippable config") {
    ExperimentConfig c = sample_config();
    c.schedule = Schedule::synchronous;
    c.samples = 4;
    c.t_max = 10;
    c.fixed_bonds = false;
    const AggregateResult result = run_experiment(c);

    const auto j = manifest_json(result, {"p0.1.csv", "manifest.json"},
                                 "2026-01-01T00:00:00Z", "2026-01-01T00:00:05Z");
    CHECK(j.at("rng_algorithm") == rng::kAlgorithmId);
    CHECK(j.at("outputs").size() == 2);
    CHECK(j.at("version") == kVersion);
    CHECK(config_from_json(j.at("config")) == c);
    REQUIRE(j.at("per_p").size() == 3);
    CHECK(j.at("per_p")[0].at("sample_seeds").size() == 4);
}

TEST_CASE("gnuplot companion references every series file") {
    ExperimentConfig c = sample_config();
    c.schedule = Schedule::synchronous;
    c.samples = 2;
    c.t_max = 5;
    c.fixed_bonds = false;
    const AggregateResult result = run_experiment(c);
    const std::string script =
        gnuplot_script(result, {"p0.1.csv", "p0.25.csv", "p0.5.csv"});
    CHECK(script.find("p0.25.csv") != std::string::npos);
    CHECK(script.find("logscale y") != std::string::npos);
}
