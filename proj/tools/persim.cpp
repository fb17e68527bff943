#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "persim/oracle.hpp"
#include "persim/report.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 runtime failure, 4 oracle failure
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitOracle = 4;

std::string p_label(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "p%g", p);
    return buf;
}

int cmd_run(const std::string& config_path, const std::string& preset_name,
            const std::string& out_dir, int samples_override,
            long t_max_override, std::uint64_t seed_override, bool have_seed,
            bool emit_gnuplot, int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    persim::ExperimentConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open " + config_path);
            config = persim::parse_config(in);
        } else if (!preset_name.empty()) {
            config = persim::preset(preset_name);
        } else {
            throw std::invalid_argument("either --config or --preset is required");
        }
        if (samples_override > 0) config.samples = samples_override;
        if (t_max_override > 0) config.t_max = t_max_override;
        if (have_seed) config.master_seed = seed_override;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const std::string started = persim::iso8601_now();
        const persim::AggregateResult result = persim::run_experiment(config);
        const std::string finished = persim::iso8601_now();

        std::filesystem::create_directories(out_dir);
        std::vector<std::string> files;
        for (const persim::PSweepResult& sweep : result.per_p) {
            const std::string name = p_label(sweep.p) + ".csv";
            const std::string path = out_dir + "/" + name;
            std::ofstream out(path, std::ios::binary);
            out << persim::series_csv(sweep);
            files.push_back(name);
        }
        std::vector<std::string> listed = files;
        if (emit_gnuplot) {
            const std::string path = out_dir + "/plot.gp";
            std::ofstream out(path);
            out << persim::gnuplot_script(result, files);
            listed.push_back("plot.gp");
        }
        listed.push_back("manifest.json");
        {
            std::ofstream out(out_dir + "/manifest.json");
            out << persim::manifest_json(result, listed, started, finished).dump(2)
                << '\n';
        }
        for (const persim::PSweepResult& sweep : result.per_p) {
            std::cout << "p=" << sweep.p;
            if (sweep.has_fits)
                std::cout << "  best=" << sweep.fits.best_label
                          << "  curvature=" << sweep.fits.curvature_stat;
            std::cout << "  kurtosis=" << sweep.returns_kurtosis << '\n';
        }
        std::cout << "wrote " << listed.size() << " files to " << out_dir
                  << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_fit(const std::string& in_path, const std::string& model, double t_min,
            double t_max, double noise_floor) {
    persim::SeriesData data;
    try {
        std::ifstream in(in_path);
        if (!in) throw std::invalid_argument("cannot open " + in_path);
        data = persim::read_series_csv(in);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        persim::FitWindow window{t_min, t_max};
        if (t_max <= 0) {
            window = model == "power_law"
                         ? persim::default_powerlaw_window(data.t, data.p_mean,
                                                           noise_floor)
                         : persim::default_exponential_window(
                               data.t, data.p_mean, noise_floor);
        }
        nlohmann::json out;
        if (model == "exponential") {
            out = persim::fit_to_json(
                persim::fit_exponential(data.t, data.p_mean, window));
        } else if (model == "power_law") {
            window.t_min = std::max(window.t_min, 1.0);
            out = persim::fit_to_json(
                persim::fit_powerlaw(data.t, data.p_mean, window));
        } else if (model == "stretched") {
            out = persim::fit_to_json(persim::fit_stretched_exponential(
                data.t, data.p_mean, window));
        } else if (model == "compare") {
            out = persim::comparison_to_json(
                persim::compare_models(data.t, data.p_mean, window));
        } else {
            std::cerr << "config error: unknown model '" << model << "'\n";
            return kExitConfig;
        }
        std::cout << out.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_oracle(long samples, std::uint64_t seed, double corrupt_offset) {
    try {
        persim::OracleOptions opt;
        opt.mc_samples = samples;
        opt.seed = seed;
        opt.corrupt_temperature_offset = corrupt_offset;
        const persim::OracleReport report = persim::run_oracle(opt);
        std::cout << report.summary();
        return report.pass ? 0 : kExitOracle;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persim: persistence dynamics in a random-bond Ising market model"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a disorder-averaged experiment");
    std::string config_path, preset_name, out_dir = "results";
    int samples_override = 0, threads = 0;
    long t_max_override = 0;
    std::uint64_t seed_override = 0;
    bool emit_gnuplot = false;
    auto* cfg_opt = run->add_option("--config", config_path, "JSON config file");
    run->add_option("--preset", preset_name, "named preset (see preset-list)")
        ->excludes(cfg_opt);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--samples", samples_override, "override sample count");
    run->add_option("--t-max", t_max_override, "override t_max");
    auto* seed_opt =
        run->add_option("--seed", seed_override, "override master seed");
    run->add_flag("--gnuplot", emit_gnuplot, "also write a gnuplot script");
    run->add_option("--threads", threads, "OpenMP thread count");

    // fit
    auto* fit = app.add_subcommand("fit", "re-fit a saved P(t) series");
    std::string fit_in, fit_model = "compare";
    double fit_t_min = 1.0, fit_t_max = 0.0, fit_floor = 0.0;
    fit->add_option("--in", fit_in, "series CSV file")->required();
    fit->add_option("--model", fit_model,
                    "exponential | power_law | stretched | compare");
    fit->add_option("--t-min", fit_t_min, "fit window start");
    fit->add_option("--t-max", fit_t_max,
                    "fit window end (default: noise-floor rule)");
    fit->add_option("--noise-floor", fit_floor,
                    "P floor for the default window rule");

    // preset-list
    auto* plist = app.add_subcommand("preset-list", "list named presets");

    // oracle
    auto* oracle = app.add_subcommand(
        "oracle", "exact-chain check of the synchronous dynamics (d=1, L=3)");
    long oracle_samples = 1'000'000;
    std::uint64_t oracle_seed = 1;
    double corrupt_offset = 0.0;
    oracle->add_option("--samples", oracle_samples, "Monte Carlo samples");
    oracle->add_option("--seed", oracle_seed, "RNG seed");
    oracle
        ->add_option("--corrupt-temperature-offset", corrupt_offset,
                     "test hook: offset the MC temperature to force a mismatch")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return cmd_run(config_path, preset_name, out_dir, samples_override,
                       t_max_override, seed_override, seed_opt->count() > 0,
                       emit_gnuplot, threads);
    if (fit->parsed())
        return cmd_fit(fit_in, fit_model, fit_t_min, fit_t_max, fit_floor);
    if (plist->parsed()) {
        for (const std::string& name : persim::preset_names()) {
            const persim::ExperimentConfig c = persim::preset(name);
            std::cout << name << ": d=" << c.dimension << " L=" << c.linear_size
                      << " T=" << c.temperature << " alpha=" << c.alpha
                      << " samples=" << c.samples << " t_max=" << c.t_max
                      << '\n';
        }
        return 0;
    }
    if (oracle->parsed())
        return cmd_oracle(oracle_samples, oracle_seed, corrupt_offset);
    return kExitConfig;
}
