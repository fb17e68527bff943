#include "persim/oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "persim/dynamics.hpp"
#include "persim/observables.hpp"

namespace persim {

namespace {

constexpr int kSites = 3;
constexpr int kConfigs = 8;

// bond pattern bits: bit k is the coupling on the pair (k, k+1 mod 3),
// set = +1.  Built through the documented text layout so the Monte Carlo
// side exercises the production BondTable path.
BondTable make_ring_bonds(int pattern) {
    std::stringstream ss;
    ss << "persim-bonds 1 3 0.5 0\n";
    for (int k = 0; k < kSites; ++k)
        ss << (((pattern >> k) & 1) ? 1 : -1) << '\n';
    return BondTable::load(ss);
}

// per-site probability that the next spin is +1, for every configuration
void up_probabilities(int pattern, double alpha, double temperature,
                      double q[kConfigs][kSites]) {
    for (int c = 0; c < kConfigs; ++c) {
        int s[kSites];
        int sum = 0;
        for (int i = 0; i < kSites; ++i) {
            s[i] = ((c >> i) & 1) ? 1 : -1;
            sum += s[i];
        }
        const double global =
            alpha * std::abs(static_cast<double>(sum) / kSites);
        for (int i = 0; i < kSites; ++i) {
            const int jb = ((pattern >> ((i + 2) % 3)) & 1) ? 1 : -1;
            const int jf = ((pattern >> i) & 1) ? 1 : -1;
            const double h =
                jb * s[(i + 2) % 3] + jf * s[(i + 1) % 3] - global;
            q[c][i] = heatbath_up_probability(h, temperature);
        }
    }
}

}  // namespace

std::vector<double> exact_chain_persistence(const OracleOptions& opt) {
    std::vector<double> expected(opt.t_max + 1, 0.0);
    expected[0] = 1.0;

    for (int pattern = 0; pattern < kConfigs; ++pattern) {
        double q[kConfigs][kSites];
        up_probabilities(pattern, opt.alpha, opt.temperature, q);

        double trans[kConfigs][kConfigs];
        for (int c = 0; c < kConfigs; ++c)
            for (int cn = 0; cn < kConfigs; ++cn) {
                double prob = 1.0;
                for (int i = 0; i < kSites; ++i)
                    prob *= ((cn >> i) & 1) ? q[c][i] : 1.0 - q[c][i];
                trans[c][cn] = prob;
            }

        for (int c0 = 0; c0 < kConfigs; ++c0) {
            // joint distribution over (configuration, persistence mask)
            double dist[kConfigs][kConfigs] = {};
            dist[c0][7] = 1.0;
            for (std::int64_t t = 1; t <= opt.t_max; ++t) {
                double next[kConfigs][kConfigs] = {};
                for (int c = 0; c < kConfigs; ++c)
                    for (int mask = 0; mask < kConfigs; ++mask) {
                        const double pr = dist[c][mask];
                        if (pr == 0.0) continue;
                        for (int cn = 0; cn < kConfigs; ++cn) {
                            const int keep = ~(cn ^ c0) & 7;  // unflipped sites
                            next[cn][mask & keep] += pr * trans[c][cn];
                        }
                    }
                double mean_p = 0.0;
                for (int c = 0; c < kConfigs; ++c)
                    for (int mask = 0; mask < kConfigs; ++mask) {
                        dist[c][mask] = next[c][mask];
                        mean_p += next[c][mask] * std::popcount(unsigned(mask));
                    }
                expected[t] += mean_p / kSites / (kConfigs * kConfigs);
            }
        }
    }
    return expected;
}

OracleReport run_oracle(const OracleOptions& opt) {
    const std::vector<double> exact = exact_chain_persistence(opt);

    const std::int64_t per_pattern = opt.mc_samples / kConfigs;
    const ModelParams params{
        opt.alpha, opt.temperature + opt.corrupt_temperature_offset,
        Schedule::synchronous};
    const LatticeGeometry geom(1, 3);

    // stratified estimate: equal sample counts per bond pattern
    std::vector<double> pat_sum(kConfigs * (opt.t_max + 1), 0.0);
    std::vector<double> pat_sumsq(kConfigs * (opt.t_max + 1), 0.0);

    for (int pattern = 0; pattern < kConfigs; ++pattern) {
        const BondTable bonds = make_ring_bonds(pattern);
        HeatBathSimulator sim(bonds, params);
        for (std::int64_t k = 0; k < per_pattern; ++k) {
            const std::uint64_t init_seed = rng::derive(
                opt.seed, {static_cast<std::uint64_t>(pattern),
                           static_cast<std::uint64_t>(k), 10});
            const std::uint64_t thermal_seed = rng::derive(
                opt.seed, {static_cast<std::uint64_t>(pattern),
                           static_cast<std::uint64_t>(k), 11});
            SpinState state = SpinState::random(geom, init_seed);
            PersistenceTracker tracker(state);
            rng::Stream noise{thermal_seed, 0};
            for (std::int64_t t = 1; t <= opt.t_max; ++t) {
                sim.step(state, noise);
                tracker.update(state);
                const double p = tracker.probability();
                pat_sum[pattern * (opt.t_max + 1) + t] += p;
                pat_sumsq[pattern * (opt.t_max + 1) + t] += p * p;
            }
        }
    }

    OracleReport report;
    report.total_samples = per_pattern * kConfigs;
    report.pass = true;
    for (std::int64_t t = 1; t <= opt.t_max; ++t) {
        double grand = 0.0, var_of_mean = 0.0;
        for (int pattern = 0; pattern < kConfigs; ++pattern) {
            const double sum = pat_sum[pattern * (opt.t_max + 1) + t];
            const double sumsq = pat_sumsq[pattern * (opt.t_max + 1) + t];
            const double mean = sum / per_pattern;
            const double var =
                (sumsq - sum * mean) / static_cast<double>(per_pattern - 1);
            grand += mean / kConfigs;
            var_of_mean += var / per_pattern / (kConfigs * kConfigs);
        }
        OracleStep step;
        step.t = t;
        step.exact = exact[t];
        step.monte_carlo = grand;
        step.mc_stderr = std::sqrt(var_of_mean);
        const double diff = std::abs(grand - exact[t]);
        step.pass = diff <= opt.stderr_multiple * step.mc_stderr &&
                    diff <= opt.abs_tolerance;
        report.pass = report.pass && step.pass;
        report.steps.push_back(step);
    }
    return report;
}

std::string OracleReport::summary() const {
    std::ostringstream out;
    for (const OracleStep& s : steps) {
        out << (s.pass ? "PASS" : "FAIL") << " t=" << s.t
            << " exact=" << s.exact << " mc=" << s.monte_carlo
            << " stderr=" << s.mc_stderr << '\n';
    }
    out << (pass ? "PASS" : "FAIL") << " exact-chain check ("
        << total_samples << " samples)\n";
    return out.str();
}

}  // namespace persim
