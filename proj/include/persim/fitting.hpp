#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace persim {

enum class DecayModel { exponential, power_law, stretched_exponential };

std::string decay_model_name(DecayModel m);

struct FitWindow {
    double t_min = 0.0;
    double t_max = 0.0;

    bool operator==(const FitWindow&) const = default;
};

// Result of a decay-law fit in transformed (log) space.
//   exponential:            P = A exp(-gamma t)          rate = gamma
//   power_law:              P = A t^(-theta)             exponent = theta
//   stretched_exponential:  P = A exp(-(gamma t)^beta)   rate, stretch = beta
struct DecayFit {
    DecayModel model = DecayModel::exponential;
    double amplitude = 0.0;
    double rate = 0.0;
    double exponent = 0.0;
    double stretch = 1.0;
    double rate_stderr = 0.0;
    double exponent_stderr = 0.0;
    FitWindow window;
    int n_points = 0;
    int n_excluded = 0;  // nonpositive-P points dropped from the window
    double rss = 0.0;    // residual sum of squares in log space
    double r2 = 0.0;
    bool converged = true;

    double rss_per_dof() const;
    int n_params() const;
};

// OLS of ln P against t over the window; gamma = -slope.
DecayFit fit_exponential(std::span<const double> t, std::span<const double> p,
                         FitWindow window);

// OLS of ln P against ln t; theta = -slope.  The window must start at
// t >= 1 (ln 0 undefined).
DecayFit fit_powerlaw(std::span<const double> t, std::span<const double> p,
                      FitWindow window);

// ln P = ln A - (gamma t)^beta, linear in (ln A, gamma^beta) at fixed beta.
// A coarse grid over beta in (0, 1] followed by golden-section refinement;
// deterministic, no random restarts.  fixed_beta pins beta (1 reproduces the
// exponential fit exactly).  Non-convergence is reported, not thrown.
DecayFit fit_stretched_exponential(std::span<const double> t,
                                   std::span<const double> p, FitWindow window,
                                   std::optional<double> fixed_beta = {});

struct ModelComparison {
    std::vector<DecayFit> ranked;  // successful fits, best rss/dof first
    double curvature_stat = 0.0;   // t-statistic of the quadratic term of ln P
    bool exponential_rejected = false;
    std::string best_label;  // model name or "no adequate model"
};

// |curvature t-stat| above which the exponential model is declared
// non-exponential, and the minimum r2 for a fit to count as adequate.
inline constexpr double kCurvatureRejectThreshold = 4.0;
inline constexpr double kAdequateR2 = 0.98;

ModelComparison compare_models(std::span<const double> t,
                               std::span<const double> p, FitWindow window);

// Default windows.  Exponential fits run from t=1 to the first point where
// the mean P drops below the sampling noise floor 5/sqrt(samples*N);
// power-law fits use the upper half of the usable (P above floor) range.
FitWindow default_exponential_window(std::span<const double> t,
                                     std::span<const double> p,
                                     double noise_floor);
FitWindow default_powerlaw_window(std::span<const double> t,
                                  std::span<const double> p,
                                  double noise_floor);

}  // namespace persim
