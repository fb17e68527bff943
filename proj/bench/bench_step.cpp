// Times the OpenMP synchronous kernel against the serial per-site reference
// and verifies they stay bitwise identical while doing so.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "persim/dynamics.hpp"

using namespace persim;

namespace {

double run(HeatBathSimulator& sim, SpinState& state, rng::Stream& noise,
           int steps, bool serial) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < steps; ++t) {
        if (serial)
            sim.step_synchronous_serial(state, noise);
        else
            sim.step(state, noise);
    }
    const auto dt = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0);
    return dt.count() / steps;
}

}  // namespace

int main(int argc, char** argv) {
    const int steps = argc > 1 ? std::atoi(argv[1]) : 50;

    struct Case {
        int d;
        SiteIndex length;
    };
    const Case cases[] = {{1, 1000001}, {2, 501}, {3, 51}, {5, 11}};

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    std::printf("%-14s %14s %14s %8s\n", "lattice", "serial us/step",
                "kernel us/step", "speedup");

    for (const Case& c : cases) {
        const LatticeGeometry geom(c.d, c.length);
        const BondTable bonds = BondTable::generate(geom, 0.3, 1);
        const ModelParams params{4.0, 2.5, Schedule::synchronous};
        HeatBathSimulator sim(bonds, params);

        SpinState a = SpinState::random(geom, 7);
        SpinState b = SpinState::random(geom, 7);
        rng::Stream na{9, 0}, nb{9, 0};
        const double serial_s = run(sim, a, na, steps, true);
        const double kernel_s = run(sim, b, nb, steps, false);
        if (a.spins() != b.spins()) {
            std::fprintf(stderr, "kernel diverged from the serial reference\n");
            return 1;
        }
        std::printf("d=%d L=%-8lld %14.1f %14.1f %7.2fx\n", c.d,
                    static_cast<long long>(c.length), serial_s * 1e6,
                    kernel_s * 1e6, serial_s / kernel_s);
    }
    return 0;
}
