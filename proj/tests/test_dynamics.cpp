#include <doctest.h>

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "persim/dynamics.hpp"

using namespace persim;

TEST_CASE("heat-bath probability basics") {
    CHECK(heatbath_up_probability(0.0, 1.0) == 0.5);
    CHECK(heatbath_up_probability(0.0, 123.0) == 0.5);
    // q = 1/(1+e^-2) for h=2, T=2
    CHECK(heatbath_up_probability(2.0, 2.0) ==
          doctest::Approx(0.8807970779778823).epsilon(1e-12));
}

TEST_CASE("heat-bath probability symmetry and monotonicity") {
    double prev = 0.0;
    for (double h = -6.0; h <= 6.0; h += 0.25) {
        const double q = heatbath_up_probability(h, 1.7);
        CHECK(q > prev);
        prev = q;
        CHECK(q + heatbath_up_probability(-h, 1.7) == doctest::Approx(1.0));
    }
}

TEST_CASE("extreme fields saturate without overflow") {
    CHECK(heatbath_up_probability(1e6, 0.01) == 1.0);
    CHECK(heatbath_up_probability(-1e6, 0.01) == 0.0);
    CHECK(heatbath_up_probability(350.0, 1.0) > 0.0);
    CHECK(std::isfinite(heatbath_up_probability(-350.0, 1.0)));
}

TEST_CASE("local field hand evaluations") {
    LatticeGeometry g(1, 5);
    const BondTable ferro = BondTable::generate(g, 1.0, 1);
    SpinState all_up = SpinState::from_spins(g, {1, 1, 1, 1, 1});
    ModelParams params{4.0, 1.0, Schedule::synchronous};
    // two +1 neighbors minus alpha*|M| = 2 - 4
    CHECK(local_field(all_up, ferro, params, 2) == doctest::Approx(-2.0));

    ModelParams free_params{0.0, 1.0, Schedule::synchronous};
    CHECK(local_field(all_up, ferro, free_params, 2) == doctest::Approx(2.0));

    LatticeGeometry g3(1, 3);
    const BondTable ferro3 = BondTable::generate(g3, 1.0, 1);
    SpinState mixed = SpinState::from_spins(g3, {1, -1, 1});
    // neighbors of site 0 are sites 1 and 2: (-1 + 1) - 4*(1/3)
    CHECK(local_field(mixed, ferro3, params, 0) ==
          doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("random initialization is balanced and cache-consistent") {
    LatticeGeometry g(1, 100001);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        SpinState s = SpinState::random(g, seed);
        CHECK(s.spin_sum() == s.recount_spin_sum());
        CHECK(s.spin_sum() % 2 != 0);  // odd N => odd sum, never zero
        CHECK(std::abs(s.magnetization()) < 4.0 / std::sqrt(100001.0));
        CHECK(s.time() == 0);
    }
}

TEST_CASE("from_spins validates input") {
    LatticeGeometry g(1, 3);
    CHECK_THROWS_AS(SpinState::from_spins(g, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SpinState::from_spins(g, {1, 0, 1}), std::invalid_argument);
}

TEST_CASE("model params are validated") {
    CHECK_THROWS_AS(ModelParams({-1.0, 1.0, Schedule::synchronous}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams({1.0, 0.0, Schedule::synchronous}).validate(),
                    std::invalid_argument);
    ModelParams ok{0.0, 2.0, Schedule::synchronous};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("synchronous steps are deterministic") {
    LatticeGeometry g(2, 11);
    const BondTable bonds = BondTable::generate(g, 0.3, 5);
    ModelParams params{4.0, 3.0, Schedule::synchronous};
    HeatBathSimulator sim(bonds, params);

    SpinState a = SpinState::random(g, 77);
    SpinState b = SpinState::random(g, 77);
    rng::Stream na{99, 0}, nb{99, 0};
    for (int t = 0; t < 20; ++t) {
        sim.step(a, na);
        sim.step(b, nb);
        CHECK(a.spins() == b.spins());
        CHECK(a.spin_sum() == a.recount_spin_sum());
    }
    CHECK(a.time() == 20);
}

TEST_CASE("OpenMP kernel reproduces the serial reference bitwise") {
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
    for (int d : {1, 2, 3}) {
        LatticeGeometry g(d, d == 1 ? 101 : 11);
        const BondTable bonds = BondTable::generate(g, 0.3, 5);
        ModelParams params{4.0, 2.5, Schedule::synchronous};
        HeatBathSimulator kernel(bonds, params);
        HeatBathSimulator reference(bonds, params);

        SpinState a = SpinState::random(g, 13);
        SpinState b = SpinState::random(g, 13);
        rng::Stream na{21, 0}, nb{21, 0};
        for (int t = 0; t < 50; ++t) {
            kernel.step(a, na);
            reference.step_synchronous_serial(b, nb);
            REQUIRE(a.spins() == b.spins());
            CHECK(a.spin_sum() == b.spin_sum());
            CHECK(na.counter == nb.counter);
        }
    }
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
}

TEST_CASE("ferromagnet at very low temperature keeps the all-up state") {
    LatticeGeometry g(2, 11);
    const BondTable bonds = BondTable::generate(g, 1.0, 1);
    ModelParams params{0.0, 0.01, Schedule::synchronous};
    HeatBathSimulator sim(bonds, params);
    SpinState s = SpinState::from_spins(
        g, std::vector<std::int8_t>(g.num_sites(), 1));
    rng::Stream noise{3, 0};
    for (int t = 0; t < 100; ++t) {
        sim.step(s, noise);
        REQUIRE(s.spin_sum() == g.num_sites());  // q(4, 0.01) == 1 to double precision
    }
}

TEST_CASE("infinite-temperature limit flips half the spins") {
    LatticeGeometry g(2, 101);
    const BondTable bonds = BondTable::generate(g, 0.5, 8);
    ModelParams params{4.0, 1e9, Schedule::synchronous};
    HeatBathSimulator sim(bonds, params);
    SpinState s = SpinState::random(g, 4);
    const std::vector<std::int8_t> before = s.spins();
    rng::Stream noise{5, 0};
    sim.step(s, noise);
    std::int64_t changed = 0;
    for (SiteIndex i = 0; i < g.num_sites(); ++i)
        if (s.spin(i) != before[i]) ++changed;
    const double frac = static_cast<double>(changed) / g.num_sites();
    CHECK(std::abs(frac - 0.5) < 4 * 0.5 / std::sqrt(10201.0));
}

TEST_CASE("random-sequential schedule is deterministic and keeps the cache") {
    LatticeGeometry g(2, 11);
    const BondTable bonds = BondTable::generate(g, 0.3, 5);
    ModelParams params{4.0, 2.5, Schedule::random_sequential};
    HeatBathSimulator sim(bonds, params);

    SpinState a = SpinState::random(g, 31);
    SpinState b = SpinState::random(g, 31);
    rng::Stream na{17, 0}, nb{17, 0};
    for (int t = 0; t < 20; ++t) {
        sim.step(a, na);
        sim.step(b, nb);
        REQUIRE(a.spins() == b.spins());
        CHECK(a.spin_sum() == a.recount_spin_sum());
        CHECK(std::abs(a.spin_sum()) >= 1);
    }
    CHECK(a.time() == 20);
    CHECK(na.counter == 2u * 20u * 121u);  // two draws per single-site update
}

TEST_CASE("update probability ignores the current spin value") {
    // heat-bath property: starting a single site from +1 or -1 with the
    // same neighbors and noise gives the same successor
    LatticeGeometry g(1, 3);
    const BondTable bonds = BondTable::generate(g, 1.0, 1);
    ModelParams params{0.0, 2.0, Schedule::synchronous};
    HeatBathSimulator sim(bonds, params);
    for (std::uint64_t key = 0; key < 200; ++key) {
        SpinState up = SpinState::from_spins(g, {1, 1, -1});
        SpinState down = SpinState::from_spins(g, {-1, 1, -1});
        // site 0's neighbors (1 and 2) agree between the two states, and
        // alpha = 0 removes the global term
        rng::Stream n1{key, 0}, n2{key, 0};
        sim.step(up, n1);
        sim.step(down, n2);
        CHECK(up.spin(0) == down.spin(0));
    }
}
