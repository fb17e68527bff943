#include "persim/dynamics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace persim {

void ModelParams::validate() const {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("alpha must be >= 0, got " +
                                    std::to_string(alpha));
    if (!(temperature > 0.0))
        throw std::invalid_argument("temperature must be > 0, got " +
                                    std::to_string(temperature));
}

double heatbath_up_probability(double h, double temperature) {
    const double x = 2.0 * h / temperature;
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

SpinState SpinState::random(const LatticeGeometry& geom, std::uint64_t seed) {
    SpinState state(geom);
    const SiteIndex n = geom.num_sites();
    state.spins_.resize(n);
    std::int64_t sum = 0;
    for (SiteIndex i = 0; i < n; ++i) {
        const std::int8_t s = (rng::at(seed, i) & 1u) ? 1 : -1;
        state.spins_[i] = s;
        sum += s;
    }
    state.spin_sum_ = sum;
    return state;
}

SpinState SpinState::from_spins(const LatticeGeometry& geom,
                                std::vector<std::int8_t> spins) {
    if (static_cast<SiteIndex>(spins.size()) != geom.num_sites())
        throw std::invalid_argument("spin count does not match geometry");
    SpinState state(geom);
    state.spins_ = std::move(spins);
    std::int64_t sum = 0;
    for (std::int8_t s : state.spins_) {
        if (s != 1 && s != -1)
            throw std::invalid_argument("spins must be +1 or -1");
        sum += s;
    }
    state.spin_sum_ = sum;
    return state;
}

std::int64_t SpinState::recount_spin_sum() const {
    std::int64_t sum = 0;
    for (std::int8_t s : spins_) sum += s;
    return sum;
}

void SpinState::dump(std::ostream& out) const {
    for (std::int8_t s : spins_) out << static_cast<int>(s) << '\n';
}

double local_field(const SpinState& state, const BondTable& bonds,
                   const ModelParams& params, SiteIndex site) {
    const LatticeGeometry& geom = state.geometry();
    int neighbor_sum = 0;
    for (int a = 0; a < geom.dimension(); ++a) {
        const SiteIndex back = geom.axis_neighbor(site, a, -1);
        const SiteIndex fwd = geom.axis_neighbor(site, a, +1);
        neighbor_sum += bonds.forward_coupling(back, a) * state.spin(back);
        neighbor_sum += bonds.forward_coupling(site, a) * state.spin(fwd);
    }
    return static_cast<double>(neighbor_sum) -
           params.alpha * std::abs(state.magnetization());
}

HeatBathSimulator::HeatBathSimulator(const BondTable& bonds,
                                     const ModelParams& params)
    : bonds_(bonds), params_(params) {
    params_.validate();
    build_tables();
}

void HeatBathSimulator::build_tables() {
    const LatticeGeometry& geom = bonds_.geometry();
    const int d = geom.dimension();
    const SiteIndex n = geom.num_sites();
    const std::size_t entries = static_cast<std::size_t>(n) * 2 * d;

    const bool narrow = n <= std::numeric_limits<std::int32_t>::max();
    if (narrow)
        neighbor32_.resize(entries);
    else
        neighbor64_.resize(entries);

    for (SiteIndex i = 0; i < n; ++i) {
        for (int a = 0; a < d; ++a) {
            const SiteIndex back = geom.axis_neighbor(i, a, -1);
            const SiteIndex fwd = geom.axis_neighbor(i, a, +1);
            const std::size_t base = static_cast<std::size_t>(i) * 2 * d + 2 * a;
            if (narrow) {
                neighbor32_[base] = static_cast<std::int32_t>(back);
                neighbor32_[base + 1] = static_cast<std::int32_t>(fwd);
            } else {
                neighbor64_[base] = back;
                neighbor64_[base + 1] = fwd;
            }
        }
    }
    scratch_.resize(n);
}

void HeatBathSimulator::step(SpinState& state, rng::Stream& noise) {
    if (params_.schedule == Schedule::synchronous)
        step_synchronous(state, noise);
    else
        step_random_sequential(state, noise);
}

void HeatBathSimulator::step_synchronous_serial(SpinState& state,
                                                rng::Stream& noise) {
    const SiteIndex n = state.geometry().num_sites();
    const std::uint64_t base =
        static_cast<std::uint64_t>(state.time_) * static_cast<std::uint64_t>(n);

    std::int64_t sum = 0;
    for (SiteIndex i = 0; i < n; ++i) {
        const double h = local_field(state, bonds_, params_, i);
        const double q = heatbath_up_probability(h, params_.temperature);
        const double u = rng::uniform(noise.key, base + i);
        scratch_[i] = (u < q) ? 1 : -1;
        sum += scratch_[i];
    }
    state.spins_.swap(scratch_);
    state.spin_sum_ = sum;
    state.time_ += 1;
    noise.counter = base + n;
}

void HeatBathSimulator::step_synchronous(SpinState& state, rng::Stream& noise) {
    const LatticeGeometry& geom = state.geometry();
    const int d = geom.dimension();
    const SiteIndex n = geom.num_sites();
    const std::uint64_t base =
        static_cast<std::uint64_t>(state.time_) * static_cast<std::uint64_t>(n);

    // The neighbor sum is an even integer in [-2d, 2d]; q takes only 2d+1
    // distinct values per step, so no exp() in the inner loop.
    double q_table[11];  // d <= 5 presets; grows trivially if ever needed
    const int levels = 2 * d + 1;
    if (levels > 11)
        throw std::invalid_argument("dimension too large for q table");
    const double global_term = params_.alpha * std::abs(state.magnetization());
    for (int k = 0; k < levels; ++k) {
        const double h =
            static_cast<double>(2 * k - 2 * d) - global_term;
        q_table[k] = heatbath_up_probability(h, params_.temperature);
    }

    const std::int8_t* spins = state.spins_.data();
    const std::int8_t* couplings = bonds_.raw().data();
    std::int8_t* next = scratch_.data();
    const bool narrow = !neighbor32_.empty();
    std::int64_t sum = 0;

    if (narrow) {
        const std::int32_t* nbr = neighbor32_.data();
#pragma omp parallel for schedule(static) reduction(+ : sum)
        for (SiteIndex i = 0; i < n; ++i) {
            int ns = 0;
            const std::size_t nb = static_cast<std::size_t>(i) * 2 * d;
            for (int a = 0; a < d; ++a) {
                const std::int32_t back = nbr[nb + 2 * a];
                const std::int32_t fwd = nbr[nb + 2 * a + 1];
                ns += couplings[static_cast<std::size_t>(back) * d + a] *
                      spins[back];
                ns += couplings[static_cast<std::size_t>(i) * d + a] *
                      spins[fwd];
            }
            const double q = q_table[(ns + 2 * d) / 2];
            const double u = rng::uniform(noise.key, base + i);
            const std::int8_t s = (u < q) ? 1 : -1;
            next[i] = s;
            sum += s;
        }
    } else {
        const std::int64_t* nbr = neighbor64_.data();
#pragma omp parallel for schedule(static) reduction(+ : sum)
        for (SiteIndex i = 0; i < n; ++i) {
            int ns = 0;
            const std::size_t nb = static_cast<std::size_t>(i) * 2 * d;
            for (int a = 0; a < d; ++a) {
                const std::int64_t back = nbr[nb + 2 * a];
                const std::int64_t fwd = nbr[nb + 2 * a + 1];
                ns += couplings[static_cast<std::size_t>(back) * d + a] *
                      spins[back];
                ns += couplings[static_cast<std::size_t>(i) * d + a] *
                      spins[fwd];
            }
            const double q = q_table[(ns + 2 * d) / 2];
            const double u = rng::uniform(noise.key, base + i);
            const std::int8_t s = (u < q) ? 1 : -1;
            next[i] = s;
            sum += s;
        }
    }

    state.spins_.swap(scratch_);
    state.spin_sum_ = sum;
    state.time_ += 1;
    noise.counter = base + n;
}

void HeatBathSimulator::step_random_sequential(SpinState& state,
                                               rng::Stream& noise) {
    const SiteIndex n = state.geometry().num_sites();
    // N single-site updates, uniformly random with replacement; the field
    // and magnetization are refreshed after every flip.
    for (SiteIndex k = 0; k < n; ++k) {
        const SiteIndex site =
            static_cast<SiteIndex>(noise.next_u64() % static_cast<std::uint64_t>(n));
        const double h = local_field(state, bonds_, params_, site);
        const double q = heatbath_up_probability(h, params_.temperature);
        const std::int8_t s = (noise.next_uniform() < q) ? 1 : -1;
        const std::int8_t old = state.spins_[site];
        if (s != old) {
            state.spins_[site] = s;
            state.spin_sum_ += s - old;
        }
    }
    state.time_ += 1;
}

}  // namespace persim
