#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "persim/fitting.hpp"

using namespace persim;

namespace {

struct Synthetic {
    std::vector<double> t, p;
};

Synthetic exponential_series(double amplitude, double gamma, int t_max) {
    Synthetic s;
    for (int t = 0; t <= t_max; ++t) {
        s.t.push_back(t);
        s.p.push_back(amplitude * std::exp(-gamma * t));
    }
    return s;
}

Synthetic powerlaw_series(double amplitude, double theta, int t_max) {
    Synthetic s;
    for (int t = 1; t <= t_max; ++t) {
        s.t.push_back(t);
        s.p.push_back(amplitude * std::pow(t, -theta));
    }
    return s;
}

Synthetic stretched_series(double gamma, double beta, int t_max) {
    Synthetic s;
    for (int t = 1; t <= t_max; ++t) {
        s.t.push_back(t);
        s.p.push_back(std::exp(-std::pow(gamma * t, beta)));
    }
    return s;
}

}  // namespace

TEST_CASE("noiseless exponential recovery") {
    const auto s = exponential_series(1.0, 0.56, 20);
    const DecayFit fit = fit_exponential(s.t, s.p, {0, 20});
    CHECK(fit.rate == doctest::Approx(0.56).epsilon(1e-12));
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.rss < 1e-24);
    CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("noiseless power-law recovery") {
    const auto s = powerlaw_series(1.0, 0.5, 100);
    const DecayFit fit = fit_powerlaw(s.t, s.p, {1, 100});
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noiseless stretched-exponential recovery") {
    const auto s = stretched_series(0.3, 0.7, 60);
    const DecayFit fit = fit_stretched_exponential(s.t, s.p, {1, 60});
    CHECK(fit.converged);
    CHECK(fit.rate == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(fit.stretch == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("stretched fit at beta = 1 equals the exponential fit") {
    const auto s = exponential_series(0.9, 0.4, 25);
    const DecayFit expo = fit_exponential(s.t, s.p, {1, 25});
    const DecayFit stretched =
        fit_stretched_exponential(s.t, s.p, {1, 25}, 1.0);
    CHECK(stretched.rate == expo.rate);
    CHECK(stretched.amplitude == expo.amplitude);
    CHECK(stretched.rss == expo.rss);
    CHECK(stretched.rate_stderr == expo.rate_stderr);
}

TEST_CASE("stretched rss never exceeds exponential rss at convergence") {
    // mildly curved data: power law seen through the exponential family
    const auto s = powerlaw_series(1.0, 0.8, 40);
    const DecayFit expo = fit_exponential(s.t, s.p, {1, 40});
    const DecayFit stretched = fit_stretched_exponential(s.t, s.p, {1, 40});
    REQUIRE(stretched.converged);
    CHECK(stretched.rss <= expo.rss + 1e-12);
}

TEST_CASE("window shift leaves exact-data parameters unchanged") {
    const auto s = exponential_series(1.0, 0.35, 40);
    const DecayFit a = fit_exponential(s.t, s.p, {0, 40});
    const DecayFit b = fit_exponential(s.t, s.p, {5, 25});
    CHECK(a.rate == doctest::Approx(b.rate).epsilon(1e-10));

    const auto sp = powerlaw_series(2.0, 0.5, 80);
    const DecayFit c = fit_powerlaw(sp.t, sp.p, {1, 80});
    const DecayFit d = fit_powerlaw(sp.t, sp.p, {10, 60});
    CHECK(c.exponent == doctest::Approx(d.exponent).epsilon(1e-10));
}

TEST_CASE("preconditions and exclusions") {
    const auto s = exponential_series(1.0, 0.5, 10);
    CHECK_THROWS_AS(fit_powerlaw(s.t, s.p, {0, 10}), std::invalid_argument);
    CHECK_THROWS_AS(fit_exponential(s.t, s.p, {8.5, 9.0}),
                    std::invalid_argument);  // < 3 points

    auto with_zero = s;
    with_zero.p[5] = 0.0;
    const DecayFit fit = fit_exponential(with_zero.t, with_zero.p, {0, 10});
    CHECK(fit.n_excluded == 1);
    CHECK(fit.n_points == 10);
    CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("model comparison ranks the generating family first") {
    const auto se = exponential_series(1.0, 0.45, 30);
    const ModelComparison ce = compare_models(se.t, se.p, {1, 30});
    REQUIRE(!ce.ranked.empty());
    // beta=1 stretched ties the exponential on exact data; the exponential
    // must at least beat the power law and show no curvature
    CHECK(ce.ranked.front().model != DecayModel::power_law);
    CHECK(std::abs(ce.curvature_stat) < kCurvatureRejectThreshold);
    CHECK_FALSE(ce.exponential_rejected);
    CHECK(ce.best_label != "no adequate model");

    const auto sp = powerlaw_series(1.0, 0.5, 100);
    const ModelComparison cp = compare_models(sp.t, sp.p, {1, 100});
    REQUIRE(!cp.ranked.empty());
    CHECK(cp.ranked.front().model == DecayModel::power_law);
    CHECK(cp.exponential_rejected);  // log P vs t is strongly curved
}

TEST_CASE("default windows follow the noise floor") {
    std::vector<double> t, p;
    for (int i = 0; i <= 30; ++i) {
        t.push_back(i);
        p.push_back(std::exp(-0.5 * i));
    }
    const double floor = std::exp(-0.5 * 20);  // crossed between t=20 and 21
    const FitWindow we = default_exponential_window(t, p, floor);
    CHECK(we.t_min == 1.0);
    CHECK(we.t_max == 19.0);
    const FitWindow wp = default_powerlaw_window(t, p, floor);
    CHECK(wp.t_min == doctest::Approx(9.5));
    CHECK(wp.t_max == 19.0);
}
