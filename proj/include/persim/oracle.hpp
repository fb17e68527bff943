#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace persim {

// Exact-chain cross-check for the synchronous heat-bath dynamics on the
// d=1, L=3 ring.  For each of the 8 bond patterns the joint distribution
// over (spin configuration x persistence mask) -- 64 states -- is evolved
// exactly from the per-site update probabilities, giving exact E[P(t)].
// Monte Carlo estimates from the production update path must agree.
struct OracleStep {
    std::int64_t t;
    double exact;
    double monte_carlo;
    double mc_stderr;
    bool pass;
};

struct OracleReport {
    std::vector<OracleStep> steps;
    std::int64_t total_samples;
    bool pass;
    std::string summary() const;
};

struct OracleOptions {
    std::int64_t mc_samples = 1'000'000;  // split evenly over 8 bond patterns
    std::int64_t t_max = 5;
    double alpha = 4.0;
    double temperature = 3.5;
    double abs_tolerance = 0.005;
    double stderr_multiple = 3.0;
    std::uint64_t seed = 1;
    // test hook: offsets the Monte Carlo temperature only, so a nonzero
    // value must make the check fail
    double corrupt_temperature_offset = 0.0;
};

// Exact E[P(t)] for t = 0..t_max, averaged over the 8 bond patterns and
// the uniform initial-configuration distribution.
std::vector<double> exact_chain_persistence(const OracleOptions& opt);

OracleReport run_oracle(const OracleOptions& opt);

}  // namespace persim
