#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "persim/dynamics.hpp"
#include "persim/fitting.hpp"
#include "persim/observables.hpp"

namespace persim {

struct ExperimentConfig {
    int dimension = 2;
    SiteIndex linear_size = 0;  // odd
    double alpha = 4.0;
    double temperature = 0.0;
    std::vector<double> p_values;
    int samples = 100;
    std::int64_t t_max = 50;
    Schedule schedule = Schedule::synchronous;
    std::uint64_t master_seed = 1;

    // 0 means "last 10% of the recorded steps, at least 1 point"
    std::int64_t tail_window = 0;
    bool fixed_bonds = false;        // reuse sample 0's bond realization
    bool allow_p_above_half = false;  // the model is symmetric about p = 0.5
    bool paper_grade = false;         // enforces samples >= 100

    // Explicit fit windows; t_max <= 0 selects the default window rule.
    FitWindow exp_window{0.0, 0.0};
    FitWindow power_window{0.0, 0.0};

    std::string preset_name;  // informational, set when built from a preset

    bool operator==(const ExperimentConfig&) const = default;

    void validate() const;
    std::int64_t effective_tail_window() const;
};

// One sample's trajectory, indexed by t = 0..t_max.  ret[0] is NaN (the
// return needs two magnetizations).
struct SampleSeries {
    std::vector<double> persistence;
    std::vector<double> abs_magnetization;
    std::vector<double> log_return;
};

struct SampleSeeds {
    std::uint64_t disorder;
    std::uint64_t initial;
    std::uint64_t thermal;
};

SampleSeeds derive_sample_seeds(const ExperimentConfig& config, double p,
                                int sample_index);

SampleSeries run_sample(const ExperimentConfig& config, double p,
                        int sample_index);

struct PSweepResult {
    double p = 0.0;
    std::vector<double> t;
    std::vector<double> p_mean;
    std::vector<double> p_stderr;
    std::vector<double> abs_m_mean;
    std::vector<double> kurtosis_running;  // pooled returns up to each t
    double returns_kurtosis = 0.0;         // final pooled value
    bool has_fits = false;
    ModelComparison fits;  // on the exponential window
    bool has_powerlaw_fit = false;
    DecayFit powerlaw_fit;  // on the long-time window
    ResidualPersistence residual;
    std::vector<SampleSeeds> sample_seeds;
};

struct AggregateResult {
    ExperimentConfig config;
    std::string rng_algorithm;
    std::vector<PSweepResult> per_p;
};

// Runs samples x |p_values| independent samples and aggregates.  Samples
// may run concurrently; the reduction is applied in sample order once all
// workers finish, so the result does not depend on the execution topology.
AggregateResult run_experiment(const ExperimentConfig& config);

// Paper-scale presets d1..d5 plus desk-scale reductions d1-desk..d5-desk.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace persim
