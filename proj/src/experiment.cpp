#include "persim/experiment.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace persim {

namespace {
constexpr std::uint64_t kDisorderTag = 1;
constexpr std::uint64_t kInitialTag = 2;
constexpr std::uint64_t kThermalTag = 3;
}  // namespace

void ExperimentConfig::validate() const {
    LatticeGeometry geom(dimension, linear_size);  // checks d, odd L, overflow
    ModelParams mp{alpha, temperature, schedule};
    mp.validate();
    if (p_values.empty())
        throw std::invalid_argument("p_values must not be empty");
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("p must be in [0, 1], got " +
                                        std::to_string(p));
        if (p > 0.5 && !allow_p_above_half)
            throw std::invalid_argument(
                "p > 0.5 is redundant (the model is symmetric about 0.5); "
                "set allow_p_above_half to override");
    }
    if (samples < 1)
        throw std::invalid_argument("samples must be >= 1");
    if (paper_grade && samples < 100)
        throw std::invalid_argument("paper-grade runs need at least 100 samples");
    if (t_max < 1)
        throw std::invalid_argument("t_max must be >= 1");
    if (tail_window < 0 || tail_window > t_max + 1)
        throw std::invalid_argument("tail_window out of range");
}

std::int64_t ExperimentConfig::effective_tail_window() const {
    if (tail_window > 0) return tail_window;
    return std::max<std::int64_t>(1, (t_max + 1) / 10);
}

SampleSeeds derive_sample_seeds(const ExperimentConfig& config, double p,
                                int sample_index) {
    const std::uint64_t p_bits = std::bit_cast<std::uint64_t>(p);
    const auto key_for = [&](int index) {
        return rng::derive(config.master_seed,
                           {p_bits, static_cast<std::uint64_t>(index)});
    };
    const std::uint64_t sample_key = key_for(sample_index);
    SampleSeeds seeds{};
    seeds.disorder = config.fixed_bonds
                         ? rng::derive(key_for(0), {kDisorderTag})
                         : rng::derive(sample_key, {kDisorderTag});
    seeds.initial = rng::derive(sample_key, {kInitialTag});
    seeds.thermal = rng::derive(sample_key, {kThermalTag});
    return seeds;
}

SampleSeries run_sample(const ExperimentConfig& config, double p,
                        int sample_index) {
    const SampleSeeds seeds = derive_sample_seeds(config, p, sample_index);
    const LatticeGeometry geom(config.dimension, config.linear_size);
    const BondTable bonds = BondTable::generate(geom, p, seeds.disorder);
    SpinState state = SpinState::random(geom, seeds.initial);
    const ModelParams params{config.alpha, config.temperature, config.schedule};
    HeatBathSimulator sim(bonds, params);
    PersistenceTracker tracker(state);
    rng::Stream noise{seeds.thermal, 0};

    SampleSeries series;
    const std::size_t len = static_cast<std::size_t>(config.t_max) + 1;
    series.persistence.reserve(len);
    series.abs_magnetization.reserve(len);
    series.log_return.reserve(len);

    series.persistence.push_back(1.0);
    series.abs_magnetization.push_back(std::abs(state.magnetization()));
    series.log_return.push_back(std::numeric_limits<double>::quiet_NaN());

    double m_prev = state.magnetization();
    for (std::int64_t t = 1; t <= config.t_max; ++t) {
        sim.step(state, noise);
        tracker.update(state);
        const double m = state.magnetization();
        series.persistence.push_back(tracker.probability());
        series.abs_magnetization.push_back(std::abs(m));
        series.log_return.push_back(market_return(m, m_prev));
        m_prev = m;
    }
    return series;
}

namespace {

PSweepResult aggregate_p(const ExperimentConfig& config, double p,
                         const std::vector<SampleSeries>& all) {
    const std::size_t len = static_cast<std::size_t>(config.t_max) + 1;
    const int s = config.samples;

    PSweepResult out;
    out.p = p;
    out.t.resize(len);
    out.p_mean.assign(len, 0.0);
    out.p_stderr.assign(len, 0.0);
    out.abs_m_mean.assign(len, 0.0);
    out.kurtosis_running.assign(len,
                                std::numeric_limits<double>::quiet_NaN());

    for (std::size_t t = 0; t < len; ++t) out.t[t] = static_cast<double>(t);

    for (const SampleSeries& one : all) {
        for (std::size_t t = 0; t < len; ++t) {
            out.p_mean[t] += one.persistence[t];
            out.abs_m_mean[t] += one.abs_magnetization[t];
        }
    }
    for (std::size_t t = 0; t < len; ++t) {
        out.p_mean[t] /= s;
        out.abs_m_mean[t] /= s;
    }
    if (s >= 2) {
        for (const SampleSeries& one : all) {
            for (std::size_t t = 0; t < len; ++t) {
                const double d = one.persistence[t] - out.p_mean[t];
                out.p_stderr[t] += d * d;
            }
        }
        for (std::size_t t = 0; t < len; ++t)
            out.p_stderr[t] =
                std::sqrt(out.p_stderr[t] / (static_cast<double>(s) * (s - 1)));
    }

    // pooled return moments per step, then prefix-merged for the running
    // kurtosis column
    std::vector<MomentAccumulator> per_t(len);
    for (const SampleSeries& one : all)
        for (std::size_t t = 1; t < len; ++t)
            per_t[t].add(one.log_return[t]);
    MomentAccumulator running;
    for (std::size_t t = 1; t < len; ++t) {
        running.merge(per_t[t]);
        out.kurtosis_running[t] = running.excess_kurtosis();
    }
    out.returns_kurtosis = running.excess_kurtosis();

    const double n_sites = static_cast<double>(
        LatticeGeometry(config.dimension, config.linear_size).num_sites());
    const double noise_floor = 5.0 / std::sqrt(s * n_sites);

    try {
        FitWindow we = config.exp_window.t_max > 0
                           ? config.exp_window
                           : default_exponential_window(out.t, out.p_mean,
                                                        noise_floor);
        out.fits = compare_models(out.t, out.p_mean, we);
        out.has_fits = true;
    } catch (const std::invalid_argument&) {
        out.has_fits = false;
    }
    try {
        FitWindow wp = config.power_window.t_max > 0
                           ? config.power_window
                           : default_powerlaw_window(out.t, out.p_mean,
                                                     noise_floor);
        out.powerlaw_fit = fit_powerlaw(out.t, out.p_mean, wp);
        out.has_powerlaw_fit = true;
    } catch (const std::invalid_argument&) {
        out.has_powerlaw_fit = false;
    }

    out.residual = residual_persistence(
        out.p_mean, static_cast<std::size_t>(config.effective_tail_window()));

    out.sample_seeds.resize(s);
    for (int i = 0; i < s; ++i)
        out.sample_seeds[i] = derive_sample_seeds(config, p, i);
    return out;
}

}  // namespace

AggregateResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    AggregateResult result;
    result.config = config;
    result.rng_algorithm = rng::kAlgorithmId;
    result.per_p.reserve(config.p_values.size());

    for (double p : config.p_values) {
        std::vector<SampleSeries> all(config.samples);
        std::string failure;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < config.samples; ++i) {
            try {
                all[i] = run_sample(config, p, i);
            } catch (const std::exception& e) {
#pragma omp critical
                failure = "sample " + std::to_string(i) + " (d=" +
                          std::to_string(config.dimension) + ", L=" +
                          std::to_string(config.linear_size) + "): " + e.what();
            }
        }
        if (!failure.empty()) throw std::runtime_error(failure);
        result.per_p.push_back(aggregate_p(config, p, all));
    }
    return result;
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.alpha = 4.0;
    c.samples = 100;
    c.schedule = Schedule::synchronous;
    c.master_seed = 1;
    c.p_values = {0.1, 0.2, 0.3, 0.4, 0.5};
    c.preset_name = name;

    if (name == "d1") {
        c.dimension = 1; c.linear_size = 4000001; c.temperature = 3.5;
        c.t_max = 50; c.paper_grade = true;
    } else if (name == "d2") {
        c.dimension = 2; c.linear_size = 2001; c.temperature = 3.0;
        c.t_max = 50; c.paper_grade = true;
    } else if (name == "d3") {
        c.dimension = 3; c.linear_size = 151; c.temperature = 2.5;
        c.t_max = 50; c.paper_grade = true;
    } else if (name == "d4") {
        c.dimension = 4; c.linear_size = 45; c.temperature = 1.9;
        c.t_max = 50; c.paper_grade = true;
    } else if (name == "d5") {
        c.dimension = 5; c.linear_size = 21; c.temperature = 1.4;
        c.t_max = 200; c.paper_grade = true;
    } else if (name == "d1-desk") {
        c.dimension = 1; c.linear_size = 100001; c.temperature = 3.5;
        c.t_max = 30;
    } else if (name == "d2-desk") {
        c.dimension = 2; c.linear_size = 201; c.temperature = 3.0;
        c.t_max = 50; c.p_values = {0.1, 0.5};
    } else if (name == "d3-desk") {
        c.dimension = 3; c.linear_size = 51; c.temperature = 2.5;
        c.t_max = 50; c.p_values = {0.1, 0.5};
    } else if (name == "d4-desk") {
        c.dimension = 4; c.linear_size = 15; c.temperature = 1.9;
        c.t_max = 50; c.p_values = {0.1, 0.5};
    } else if (name == "d5-desk") {
        c.dimension = 5; c.linear_size = 11; c.temperature = 1.4;
        c.t_max = 200; c.samples = 200; c.p_values = {0.3};
    } else {
        std::string names;
        for (const std::string& n : preset_names()) names += " " + n;
        throw std::invalid_argument("unknown preset '" + name +
                                    "'; valid presets:" + names);
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"d1", "d2", "d3", "d4", "d5",
            "d1-desk", "d2-desk", "d3-desk", "d4-desk", "d5-desk"};
}

}  // namespace persim
