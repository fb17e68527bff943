#include "persim/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace persim {

namespace {

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

}  // namespace

std::string series_csv(const PSweepResult& sweep) {
    std::string out = "t,P_mean,P_stderr,absM_mean,ret_kurtosis_running\n";
    for (std::size_t i = 0; i < sweep.t.size(); ++i) {
        out += fmt(sweep.t[i]);
        out += ',';
        out += fmt(sweep.p_mean[i]);
        out += ',';
        out += fmt(sweep.p_stderr[i]);
        out += ',';
        out += fmt(sweep.abs_m_mean[i]);
        out += ',';
        out += fmt(sweep.kurtosis_running[i]);
        out += '\n';
    }
    return out;
}

SeriesData read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty series file");
    if (line != "t,P_mean,P_stderr,absM_mean,ret_kurtosis_running")
        throw std::runtime_error("unexpected series header: " + line);

    SeriesData data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v[5];
        int field = 0;
        std::size_t pos = 0;
        while (field < 5) {
            const std::size_t next = line.find(',', pos);
            v[field++] = std::strtod(line.c_str() + pos, nullptr);
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (field != 5)
            throw std::runtime_error("malformed series row: " + line);
        data.t.push_back(v[0]);
        data.p_mean.push_back(v[1]);
        data.p_stderr.push_back(v[2]);
        data.abs_m_mean.push_back(v[3]);
        data.kurtosis_running.push_back(v[4]);
    }
    return data;
}

namespace {

std::string schedule_name(Schedule s) {
    return s == Schedule::synchronous ? "synchronous" : "random_sequential";
}

Schedule schedule_from_name(const std::string& name) {
    if (name == "synchronous") return Schedule::synchronous;
    if (name == "random_sequential") return Schedule::random_sequential;
    throw std::invalid_argument(
        "schedule must be 'synchronous' or 'random_sequential', got '" + name +
        "'");
}

}  // namespace

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["dimension"] = c.dimension;
    j["length"] = c.linear_size;
    j["alpha"] = c.alpha;
    j["temperature"] = c.temperature;
    j["p_values"] = c.p_values;
    j["samples"] = c.samples;
    j["t_max"] = c.t_max;
    j["schedule"] = schedule_name(c.schedule);
    j["master_seed"] = c.master_seed;
    j["tail_window"] = c.tail_window;
    j["fixed_bonds"] = c.fixed_bonds;
    j["allow_p_above_half"] = c.allow_p_above_half;
    j["paper_grade"] = c.paper_grade;
    if (c.exp_window.t_max > 0)
        j["exp_window"] = {c.exp_window.t_min, c.exp_window.t_max};
    if (c.power_window.t_max > 0)
        j["power_window"] = {c.power_window.t_min, c.power_window.t_max};
    if (!c.preset_name.empty()) j["preset"] = c.preset_name;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");

    static const char* known[] = {
        "preset",      "dimension",   "length",        "alpha",
        "temperature", "p_values",    "samples",       "t_max",
        "schedule",    "master_seed", "tail_window",   "fixed_bonds",
        "allow_p_above_half", "paper_grade", "exp_window", "power_window"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("unknown config key '" + it.key() + "'");
    }

    ExperimentConfig c;
    if (j.contains("preset")) {
        c = preset(j.at("preset").get<std::string>());
    } else {
        for (const char* required : {"dimension", "length", "temperature"})
            if (!j.contains(required))
                throw std::invalid_argument(std::string("missing config key '") +
                                            required + "'");
    }

    try {
        if (j.contains("dimension")) c.dimension = j.at("dimension").get<int>();
        if (j.contains("length")) c.linear_size = j.at("length").get<SiteIndex>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("temperature"))
            c.temperature = j.at("temperature").get<double>();
        if (j.contains("p_values"))
            c.p_values = j.at("p_values").get<std::vector<double>>();
        if (j.contains("samples")) c.samples = j.at("samples").get<int>();
        if (j.contains("t_max")) c.t_max = j.at("t_max").get<std::int64_t>();
        if (j.contains("schedule"))
            c.schedule = schedule_from_name(j.at("schedule").get<std::string>());
        if (j.contains("master_seed"))
            c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("tail_window"))
            c.tail_window = j.at("tail_window").get<std::int64_t>();
        if (j.contains("fixed_bonds"))
            c.fixed_bonds = j.at("fixed_bonds").get<bool>();
        if (j.contains("allow_p_above_half"))
            c.allow_p_above_half = j.at("allow_p_above_half").get<bool>();
        if (j.contains("paper_grade"))
            c.paper_grade = j.at("paper_grade").get<bool>();
        if (j.contains("exp_window")) {
            auto w = j.at("exp_window").get<std::vector<double>>();
            if (w.size() != 2)
                throw std::invalid_argument("exp_window must be [t_min, t_max]");
            c.exp_window = {w[0], w[1]};
        }
        if (j.contains("power_window")) {
            auto w = j.at("power_window").get<std::vector<double>>();
            if (w.size() != 2)
                throw std::invalid_argument(
                    "power_window must be [t_min, t_max]");
            c.power_window = {w[0], w[1]};
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed config value: ") +
                                    e.what());
    }

    c.validate();
    return c;
}

ExperimentConfig parse_config(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                    e.what());
    }
    return config_from_json(j);
}

nlohmann::json fit_to_json(const DecayFit& fit) {
    nlohmann::json j;
    j["model"] = decay_model_name(fit.model);
    j["amplitude"] = fit.amplitude;
    switch (fit.model) {
        case DecayModel::exponential:
            j["gamma"] = fit.rate;
            j["gamma_stderr"] = fit.rate_stderr;
            break;
        case DecayModel::power_law:
            j["theta"] = fit.exponent;
            j["theta_stderr"] = fit.exponent_stderr;
            break;
        case DecayModel::stretched_exponential:
            j["gamma"] = fit.rate;
            j["gamma_stderr"] = fit.rate_stderr;
            j["beta"] = fit.stretch;
            break;
    }
    j["window"] = {fit.window.t_min, fit.window.t_max};
    j["n_points"] = fit.n_points;
    j["n_excluded"] = fit.n_excluded;
    j["rss"] = fit.rss;
    j["rss_per_dof"] = fit.rss_per_dof();
    j["r2"] = fit.r2;
    j["converged"] = fit.converged;
    return j;
}

nlohmann::json comparison_to_json(const ModelComparison& cmp) {
    nlohmann::json j;
    j["ranked"] = nlohmann::json::array();
    for (const DecayFit& f : cmp.ranked) j["ranked"].push_back(fit_to_json(f));
    j["curvature_stat"] = cmp.curvature_stat;
    j["exponential_rejected"] = cmp.exponential_rejected;
    j["best_label"] = cmp.best_label;
    return j;
}

nlohmann::json manifest_json(const AggregateResult& result,
                             const std::vector<std::string>& output_files,
                             const std::string& started_at,
                             const std::string& finished_at) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["rng_algorithm"] = result.rng_algorithm;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["config"] = config_to_json(result.config);
    j["outputs"] = output_files;

    j["per_p"] = nlohmann::json::array();
    for (const PSweepResult& sweep : result.per_p) {
        nlohmann::json e;
        e["p"] = sweep.p;
        e["returns_kurtosis"] = sweep.returns_kurtosis;
        if (sweep.has_fits) e["fits"] = comparison_to_json(sweep.fits);
        if (sweep.has_powerlaw_fit)
            e["powerlaw_long_time"] = fit_to_json(sweep.powerlaw_fit);
        e["residual"] = {{"p_inf", sweep.residual.p_inf},
                         {"tail_slope", sweep.residual.tail_slope},
                         {"tail_slope_stderr", sweep.residual.tail_slope_stderr},
                         {"blocking_suspected", sweep.residual.blocking_suspected}};
        nlohmann::json seeds = nlohmann::json::array();
        for (const SampleSeeds& s : sweep.sample_seeds)
            seeds.push_back({{"disorder", s.disorder},
                             {"initial", s.initial},
                             {"thermal", s.thermal}});
        e["sample_seeds"] = std::move(seeds);
        j["per_p"].push_back(std::move(e));
    }
    return j;
}

std::string gnuplot_script(const AggregateResult& result,
                           const std::vector<std::string>& csv_files) {
    std::ostringstream out;
    out << "set datafile separator ','\n"
        << "set key top right\n"
        << "set xlabel 't'\n"
        << "set ylabel 'P(t)'\n"
        << "set logscale y\n"
        << "plot ";
    for (std::size_t i = 0; i < csv_files.size(); ++i) {
        if (i) out << ", \\\n     ";
        out << '\'' << csv_files[i] << "' using 1:2 skip 1 with linespoints"
            << " title 'p=" << result.per_p[i].p << '\'';
    }
    out << '\n';
    return out.str();
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace persim
