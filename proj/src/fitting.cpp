#include "persim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace persim {

std::string decay_model_name(DecayModel m) {
    switch (m) {
        case DecayModel::exponential: return "exponential";
        case DecayModel::power_law: return "power_law";
        case DecayModel::stretched_exponential: return "stretched_exponential";
    }
    return "?";
}

int DecayFit::n_params() const {
    return model == DecayModel::stretched_exponential ? 3 : 2;
}

double DecayFit::rss_per_dof() const {
    const int dof = n_points - n_params();
    return dof > 0 ? rss / dof : std::numeric_limits<double>::infinity();
}

namespace {

struct Points {
    std::vector<double> t;
    std::vector<double> log_p;
    int excluded = 0;
};

Points collect(std::span<const double> t, std::span<const double> p,
               FitWindow w) {
    if (t.size() != p.size())
        throw std::invalid_argument("t and P series differ in length");
    Points pts;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < w.t_min || t[i] > w.t_max) continue;
        if (!(p[i] > 0.0)) {
            ++pts.excluded;  // zero counts carry no information for a log fit
            continue;
        }
        pts.t.push_back(t[i]);
        pts.log_p.push_back(std::log(p[i]));
    }
    if (pts.t.size() < 3)
        throw std::invalid_argument(
            "fewer than 3 usable (P > 0) points in the fit window");
    return pts;
}

struct LineFit {
    double intercept, slope, slope_stderr, rss, r2;
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("degenerate abscissa in fit window");

    LineFit f{};
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.rss += r * r;
    }
    f.r2 = (syy > 0.0) ? 1.0 - f.rss / syy : 1.0;
    f.slope_stderr =
        n > 2 ? std::sqrt(f.rss / static_cast<double>(n - 2) / sxx)
              : std::numeric_limits<double>::infinity();
    return f;
}

}  // namespace

DecayFit fit_exponential(std::span<const double> t, std::span<const double> p,
                         FitWindow window) {
    Points pts = collect(t, p, window);
    LineFit lf = ols(pts.t, pts.log_p);

    DecayFit fit;
    fit.model = DecayModel::exponential;
    fit.amplitude = std::exp(lf.intercept);
    fit.rate = -lf.slope;
    fit.rate_stderr = lf.slope_stderr;
    fit.window = window;
    fit.n_points = static_cast<int>(pts.t.size());
    fit.n_excluded = pts.excluded;
    fit.rss = lf.rss;
    fit.r2 = lf.r2;
    return fit;
}

DecayFit fit_powerlaw(std::span<const double> t, std::span<const double> p,
                      FitWindow window) {
    if (window.t_min < 1.0)
        throw std::invalid_argument(
            "power-law window must start at t >= 1 (log t undefined below)");
    Points pts = collect(t, p, window);
    std::vector<double> log_t(pts.t.size());
    for (std::size_t i = 0; i < pts.t.size(); ++i) log_t[i] = std::log(pts.t[i]);
    LineFit lf = ols(log_t, pts.log_p);

    DecayFit fit;
    fit.model = DecayModel::power_law;
    fit.amplitude = std::exp(lf.intercept);
    fit.exponent = -lf.slope;
    fit.exponent_stderr = lf.slope_stderr;
    fit.window = window;
    fit.n_points = static_cast<int>(pts.t.size());
    fit.n_excluded = pts.excluded;
    fit.rss = lf.rss;
    fit.r2 = lf.r2;
    return fit;
}

namespace {

// ln P = c0 - c1 * t^beta; returns rss, or infinity when c1 <= 0
// (decay rate must be positive for the model to make sense).
double stretched_rss_at(const Points& pts, double beta, LineFit& lf_out,
                        std::vector<double>& x_scratch) {
    x_scratch.resize(pts.t.size());
    for (std::size_t i = 0; i < pts.t.size(); ++i)
        x_scratch[i] = std::pow(pts.t[i], beta);
    lf_out = ols(x_scratch, pts.log_p);
    if (!(-lf_out.slope > 0.0))
        return std::numeric_limits<double>::infinity();
    return lf_out.rss;
}

}  // namespace

DecayFit fit_stretched_exponential(std::span<const double> t,
                                   std::span<const double> p, FitWindow window,
                                   std::optional<double> fixed_beta) {
    Points pts = collect(t, p, window);
    std::vector<double> scratch;
    LineFit lf{};
    double beta = 1.0;

    if (fixed_beta) {
        beta = *fixed_beta;
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("stretch exponent must be in (0, 1]");
        stretched_rss_at(pts, beta, lf, scratch);
    } else {
        // coarse grid, then golden-section refinement around the best cell
        double best_beta = 1.0;
        double best_rss = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 20; ++k) {
            const double b = 0.05 * k;
            LineFit trial{};
            const double rss = stretched_rss_at(pts, b, trial, scratch);
            if (rss < best_rss) {
                best_rss = rss;
                best_beta = b;
            }
        }
        double lo = std::max(1e-3, best_beta - 0.05);
        double hi = std::min(1.0, best_beta + 0.05);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        LineFit f1{}, f2{};
        double r1 = stretched_rss_at(pts, x1, f1, scratch);
        double r2 = stretched_rss_at(pts, x2, f2, scratch);
        for (int it = 0; it < 90; ++it) {
            if (r1 < r2) {
                hi = x2;
                x2 = x1;
                r2 = r1;
                x1 = hi - gr * (hi - lo);
                r1 = stretched_rss_at(pts, x1, f1, scratch);
            } else {
                lo = x1;
                x1 = x2;
                r1 = r2;
                x2 = lo + gr * (hi - lo);
                r2 = stretched_rss_at(pts, x2, f2, scratch);
            }
        }
        beta = (r1 < r2) ? x1 : x2;
        stretched_rss_at(pts, beta, lf, scratch);
    }

    DecayFit fit;
    fit.model = DecayModel::stretched_exponential;
    fit.stretch = beta;
    fit.window = window;
    fit.n_points = static_cast<int>(pts.t.size());
    fit.n_excluded = pts.excluded;
    fit.rss = lf.rss;
    fit.r2 = lf.r2;
    fit.amplitude = std::exp(lf.intercept);

    const double c1 = -lf.slope;  // = gamma^beta
    if (c1 > 0.0) {
        fit.rate = std::pow(c1, 1.0 / beta);
        // delta method through gamma = c1^(1/beta)
        fit.rate_stderr =
            std::pow(c1, 1.0 / beta - 1.0) / beta * lf.slope_stderr;
        fit.converged = true;
    } else {
        fit.rate = 0.0;
        fit.rate_stderr = std::numeric_limits<double>::infinity();
        fit.converged = false;  // legitimate outcome: no decaying solution
    }
    return fit;
}

namespace {

// quadratic OLS of y on (1, x, x^2); returns the t-statistic of the
// quadratic coefficient
double quadratic_term_tstat(const std::vector<double>& x,
                            const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 4) return 0.0;

    // normal equations for [1, x, x^2]
    double m[3][3] = {};
    double v[3] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double b[3] = {1.0, x[i], x[i] * x[i]};
        for (int r = 0; r < 3; ++r) {
            v[r] += b[r] * y[i];
            for (int c = 0; c < 3; ++c) m[r][c] += b[r] * b[c];
        }
    }
    // invert via Gaussian elimination with the identity alongside
    double inv[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double a[3][3];
    std::copy(&m[0][0], &m[0][0] + 9, &a[0][0]);
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return 0.0;
        std::swap_ranges(a[col], a[col] + 3, a[piv]);
        std::swap_ranges(inv[col], inv[col] + 3, inv[piv]);
        const double d = a[col][col];
        for (int c = 0; c < 3; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (int c = 0; c < 3; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    double coef[3];
    for (int r = 0; r < 3; ++r)
        coef[r] = inv[r][0] * v[0] + inv[r][1] * v[1] + inv[r][2] * v[2];

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = coef[0] + coef[1] * x[i] + coef[2] * x[i] * x[i];
        rss += (y[i] - fit) * (y[i] - fit);
    }
    const double sigma2 = rss / static_cast<double>(n - 3);
    const double se = std::sqrt(std::max(sigma2 * inv[2][2], 0.0));
    if (!(se > 0.0)) return 0.0;
    return coef[2] / se;
}

}  // namespace

ModelComparison compare_models(std::span<const double> t,
                               std::span<const double> p, FitWindow window) {
    ModelComparison cmp;

    auto try_fit = [&](auto&& f) {
        try {
            DecayFit fit = f();
            if (fit.converged && std::isfinite(fit.rss))
                cmp.ranked.push_back(fit);
        } catch (const std::invalid_argument&) {
            // model not applicable on this window; ranking proceeds without it
        }
    };
    try_fit([&] { return fit_exponential(t, p, window); });
    try_fit([&] {
        FitWindow w = window;
        w.t_min = std::max(w.t_min, 1.0);
        return fit_powerlaw(t, p, w);
    });
    try_fit([&] { return fit_stretched_exponential(t, p, window); });

    std::stable_sort(cmp.ranked.begin(), cmp.ranked.end(),
                     [](const DecayFit& a, const DecayFit& b) {
                         return a.rss_per_dof() < b.rss_per_dof();
                     });

    Points pts = collect(t, p, window);
    cmp.curvature_stat = quadratic_term_tstat(pts.t, pts.log_p);
    cmp.exponential_rejected =
        std::abs(cmp.curvature_stat) > kCurvatureRejectThreshold;

    if (!cmp.ranked.empty() && cmp.ranked.front().r2 >= kAdequateR2)
        cmp.best_label = decay_model_name(cmp.ranked.front().model);
    else
        cmp.best_label = "no adequate model";
    return cmp;
}

FitWindow default_exponential_window(std::span<const double> t,
                                     std::span<const double> p,
                                     double noise_floor) {
    FitWindow w{1.0, 1.0};
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 1.0) continue;
        if (!(p[i] > noise_floor)) break;  // stop at the first floor crossing
        w.t_max = t[i];
        any = true;
    }
    if (!any)
        throw std::invalid_argument("no points above the noise floor at t >= 1");
    return w;
}

FitWindow default_powerlaw_window(std::span<const double> t,
                                  std::span<const double> p,
                                  double noise_floor) {
    FitWindow usable = default_exponential_window(t, p, noise_floor);
    FitWindow w;
    w.t_max = usable.t_max;
    w.t_min = std::max(1.0, 0.5 * usable.t_max);  // "long times": upper half
    return w;
}

}  // namespace persim
