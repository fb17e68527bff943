#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "persim/dynamics.hpp"

namespace persim {

// Per-site never-flipped flags packed into 64-bit words, with a running
// count.  Flags are monotone: once cleared they stay cleared.
class PersistenceTracker {
public:
    explicit PersistenceTracker(const SpinState& initial);

    // Clears the flag of every site whose spin differs from its t=0 value.
    // Called once per time step; idempotent for an unchanged configuration.
    void update(const SpinState& state);

    std::int64_t count() const { return count_; }
    double probability() const {
        return static_cast<double>(count_) / static_cast<double>(num_sites_);
    }
    bool persistent(SiteIndex site) const {
        return (flags_[site >> 6] >> (site & 63)) & 1u;
    }

    std::int64_t popcount() const;  // recount from the words, for checks

private:
    SiteIndex num_sites_;
    std::vector<std::uint64_t> flags_;
    std::vector<std::int8_t> initial_;
    std::int64_t count_;
};

// Log-return of the absolute magnetization, ln|m_now| - ln|m_prev|.
// Both magnetizations are nonzero by the odd-N parity argument.
double market_return(double m_now, double m_prev);

struct ResidualPersistence {
    double p_inf = 0.0;            // tail mean of P
    std::vector<double> residual;  // r(t) = P(t) - p_inf
    double tail_slope = 0.0;
    double tail_slope_stderr = 0.0;
    bool blocking_suspected = false;
};

// Estimates P(infinity) as the mean of the last `tail_window` points and
// flags possible blocking: a tail level above `blocking_threshold` whose
// slope is statistically zero (|slope| < 2 stderr).  Diagnostic only.
ResidualPersistence residual_persistence(std::span<const double> p_series,
                                         std::size_t tail_window,
                                         double blocking_threshold = 1e-3);

// Plateau estimate for a tail that is still decaying: regress P(t) against
// t^(-theta) over the last `tail_window` points and return the intercept,
// i.e. the t -> infinity limit along the fitted power-law trend.  For a pure
// power-law tail this is ~0; a blocked fraction shows up as a positive
// offset.  May come out slightly negative from noise.
double extrapolated_p_inf(std::span<const double> t,
                          std::span<const double> p_series, double theta,
                          std::size_t tail_window);

// Sample excess kurtosis (fourth standardized moment minus 3).  Throws on
// fewer than 4 points or degenerate variance.
double excess_kurtosis(std::span<const double> xs);

// Streaming raw-moment accumulator for the pooled returns, so the running
// kurtosis column can be produced without storing every sample's series.
struct MomentAccumulator {
    std::int64_t n = 0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

    void add(double x) {
        const double x2 = x * x;
        n += 1;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
    }
    void merge(const MomentAccumulator& o) {
        n += o.n;
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
    }
    // NaN when n < 4 or the variance is degenerate.
    double excess_kurtosis() const;
};

}  // namespace persim
