#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "persim/disorder.hpp"
#include "persim/lattice.hpp"
#include "persim/rng.hpp"

namespace persim {

enum class Schedule { synchronous, random_sequential };

struct ModelParams {
    double alpha = 4.0;        // coupling to |M(t)|, >= 0
    double temperature = 1.0;  // > 0
    Schedule schedule = Schedule::synchronous;

    void validate() const;
};

// Probability that the updated spin is +1 in a heat-bath move at local
// field h: q = 1 / (1 + exp(-2h/T)).  Evaluated in the branch that never
// overflows, so extreme |h|/T saturates to 0 or 1.
double heatbath_up_probability(double h, double temperature);

// Spin configuration with a cached spin sum.  N is odd, so |spin_sum| >= 1
// always and the magnetization never vanishes.
class SpinState {
public:
    // Independent uniform +-1 per site, drawn from the given stream key.
    static SpinState random(const LatticeGeometry& geom, std::uint64_t seed);

    // Explicit configuration in the documented site order (snapshot load,
    // crafted test states).
    static SpinState from_spins(const LatticeGeometry& geom,
                                std::vector<std::int8_t> spins);

    const LatticeGeometry& geometry() const { return geom_; }
    std::int64_t time() const { return time_; }
    std::int64_t spin_sum() const { return spin_sum_; }
    double magnetization() const {
        return static_cast<double>(spin_sum_) /
               static_cast<double>(geom_.num_sites());
    }
    int spin(SiteIndex site) const { return spins_[site]; }
    const std::vector<std::int8_t>& spins() const { return spins_; }

    std::int64_t recount_spin_sum() const;

    void dump(std::ostream& out) const;

private:
    friend class HeatBathSimulator;
    explicit SpinState(const LatticeGeometry& geom) : geom_(geom) {}

    LatticeGeometry geom_;
    std::vector<std::int8_t> spins_;
    std::int64_t spin_sum_ = 0;
    std::int64_t time_ = 0;
};

// Local field of site i: sum of J_ij * S_j over the 2d neighbors minus
// alpha * |M(t)|.  The global term is identical for every site at a given
// instant and is always subtracted.
double local_field(const SpinState& state, const BondTable& bonds,
                   const ModelParams& params, SiteIndex site);

// Heat-bath update engine.  One step() call advances one time unit:
// a full parallel update (synchronous) or N random single-site updates
// (random-sequential).
//
// Thermal noise is counter-addressed on the stream key: the synchronous
// draw for site i at step t sits at counter t*N + i, which makes the
// OpenMP and serial paths bitwise identical.  The random-sequential
// schedule consumes the stream sequentially (2 draws per site update) and
// is single-threaded by contract.
class HeatBathSimulator {
public:
    HeatBathSimulator(const BondTable& bonds, const ModelParams& params);

    void step(SpinState& state, rng::Stream& noise);

    // Plain per-site reference for the synchronous schedule; the OpenMP
    // kernel must reproduce it bitwise.
    void step_synchronous_serial(SpinState& state, rng::Stream& noise);

    const ModelParams& params() const { return params_; }

private:
    void step_synchronous(SpinState& state, rng::Stream& noise);
    void step_random_sequential(SpinState& state, rng::Stream& noise);
    void build_tables();

    const BondTable& bonds_;
    ModelParams params_;
    // neighbor_[i*2d + 2a] / [.. + 2a+1]: backward/forward neighbor on axis a
    std::vector<std::int32_t> neighbor32_;
    std::vector<std::int64_t> neighbor64_;
    std::vector<std::int8_t> scratch_;
};

}  // namespace persim
