#include "persim/observables.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace persim {

PersistenceTracker::PersistenceTracker(const SpinState& initial)
    : num_sites_(initial.geometry().num_sites()),
      initial_(initial.spins()),
      count_(initial.geometry().num_sites()) {
    flags_.assign(static_cast<std::size_t>((num_sites_ + 63) / 64),
                  ~std::uint64_t{0});
    // mask off the bits past N in the last word
    const int rem = static_cast<int>(num_sites_ % 64);
    if (rem != 0) flags_.back() = (std::uint64_t{1} << rem) - 1;
}

void PersistenceTracker::update(const SpinState& state) {
    if (state.geometry().num_sites() != num_sites_)
        throw std::invalid_argument("spin state size does not match tracker");

    const std::int8_t* now = state.spins().data();
    const std::int8_t* init = initial_.data();
    std::int64_t cleared = 0;
    const std::size_t words = flags_.size();

#pragma omp parallel for schedule(static) reduction(+ : cleared)
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = flags_[w];
        if (bits == 0) continue;
        const SiteIndex lo = static_cast<SiteIndex>(w) * 64;
        std::uint64_t still = bits;
        while (still) {
            const int b = std::countr_zero(still);
            still &= still - 1;
            const SiteIndex i = lo + b;
            if (now[i] != init[i]) bits &= ~(std::uint64_t{1} << b);
        }
        cleared += std::popcount(flags_[w]) - std::popcount(bits);
        flags_[w] = bits;
    }
    count_ -= cleared;
    assert(count_ >= 0);
}

std::int64_t PersistenceTracker::popcount() const {
    std::int64_t n = 0;
    for (std::uint64_t w : flags_) n += std::popcount(w);
    return n;
}

double market_return(double m_now, double m_prev) {
    assert(m_now != 0.0 && m_prev != 0.0);
    return std::log(std::abs(m_now)) - std::log(std::abs(m_prev));
}

namespace {

// slope and its standard error from an OLS line fit of y against x
void ols_line(std::span<const double> x, std::span<const double> y,
              double& slope, double& slope_stderr) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - my - slope * (x[i] - mx);
        rss += r * r;
    }
    slope_stderr = (n > 2 && sxx > 0.0)
                       ? std::sqrt(rss / static_cast<double>(n - 2) / sxx)
                       : std::numeric_limits<double>::infinity();
}

}  // namespace

ResidualPersistence residual_persistence(std::span<const double> p_series,
                                         std::size_t tail_window,
                                         double blocking_threshold) {
    if (p_series.empty())
        throw std::invalid_argument("persistence series is empty");
    if (tail_window == 0 || tail_window > p_series.size())
        throw std::invalid_argument("tail window must be in [1, series length]");

    ResidualPersistence out;
    const std::size_t start = p_series.size() - tail_window;
    double tail_sum = 0.0;
    for (std::size_t i = start; i < p_series.size(); ++i)
        tail_sum += p_series[i];
    out.p_inf = tail_sum / static_cast<double>(tail_window);

    out.residual.resize(p_series.size());
    for (std::size_t i = 0; i < p_series.size(); ++i)
        out.residual[i] = p_series[i] - out.p_inf;

    if (tail_window >= 3) {
        std::vector<double> ts(tail_window), ps(tail_window);
        for (std::size_t i = 0; i < tail_window; ++i) {
            ts[i] = static_cast<double>(start + i);
            ps[i] = p_series[start + i];
        }
        ols_line(ts, ps, out.tail_slope, out.tail_slope_stderr);
    }
    out.blocking_suspected =
        out.p_inf > blocking_threshold &&
        std::abs(out.tail_slope) <= 2.0 * out.tail_slope_stderr;
    return out;
}

double extrapolated_p_inf(std::span<const double> t,
                          std::span<const double> p_series, double theta,
                          std::size_t tail_window) {
    if (t.size() != p_series.size())
        throw std::invalid_argument("t and P series lengths differ");
    if (tail_window < 3 || tail_window > t.size())
        throw std::invalid_argument("tail window must be in [3, series length]");
    if (!(theta > 0.0))
        throw std::invalid_argument("theta must be positive");

    const std::size_t start = t.size() - tail_window;
    std::vector<double> x(tail_window), y(tail_window);
    for (std::size_t i = 0; i < tail_window; ++i) {
        if (!(t[start + i] > 0.0))
            throw std::invalid_argument("tail times must be positive");
        x[i] = std::pow(t[start + i], -theta);
        y[i] = p_series[start + i];
    }
    double slope, slope_stderr;
    ols_line(x, y, slope, slope_stderr);
    // intercept of the line P = slope * t^-theta + intercept
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < tail_window; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(tail_window);
    my /= static_cast<double>(tail_window);
    return my - slope * mx;
}

double MomentAccumulator::excess_kurtosis() const {
    if (n < 4) return std::numeric_limits<double>::quiet_NaN();
    const double dn = static_cast<double>(n);
    const double mean = s1 / dn;
    const double m2 = s2 / dn - mean * mean;
    const double m4 = s4 / dn - 4.0 * mean * (s3 / dn) +
                      6.0 * mean * mean * (s2 / dn) - 3.0 * mean * mean * mean * mean;
    if (!(m2 > 0.0) || m2 * m2 < 1e-300)
        return std::numeric_limits<double>::quiet_NaN();
    return m4 / (m2 * m2) - 3.0;
}

double excess_kurtosis(std::span<const double> xs) {
    if (xs.size() < 4)
        throw std::invalid_argument("excess kurtosis needs at least 4 points");
    MomentAccumulator acc;
    // center first for numerical stability of the raw-moment sums
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    for (double x : xs) acc.add(x - mean);
    const double k = acc.excess_kurtosis();
    if (std::isnan(k))
        throw std::domain_error("degenerate variance: kurtosis undefined");
    return k;
}

}  // namespace persim
