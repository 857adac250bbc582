#pragma once

#include <span>
#include <string>
#include <vector>

#include "qd/numerics.hpp"

namespace qd {

/// Mutual information of the continuous measurement without feedback at time
/// t, equal priors, by adaptive quadrature over the outcome variable v.
/// Returns 0 at t = 0 (degenerate density handled analytically).
double mutual_info_nofb(double theta, double gamma, double t);

/// Same for the feedback-controlled measurement (outcome variable u,
/// strength Gamma(t)); Gamma = 0 returns 0.
double mutual_info_fb(double theta0, double gamma, double t);

/// ln 2 - mean H(p1) over Monte Carlo samples of P1(t), with jackknife
/// standard error. Requires >= 100 samples and equal priors.
MeanStderr mutual_info_mc(std::span<const double> p1_samples);

/// Pipelined channel rate: M / max(t_prep, t_meas).
double transmission_rate(double m_nats, double t_prep, double t_meas);

struct RatePoint {
    double t_prep = 0.0;
    double t_meas_opt = 0.0;
    double rate = 0.0;
    double percent_increase = 0.0;
    bool fallback_used = false;  // optimizer fell back to a dense scan
};

/// Maximizes M(t) / max(t_prep, t) over the measurement time. M(t) is
/// nondecreasing, so the search runs over t in [t_prep, 50/gamma]
/// (golden section, relative tolerance 1e-6, ties toward smaller t).
RatePoint optimal_rate(double theta, double gamma, double t_prep, bool feedback);

/// Percent increase of the optimal feedback rate over the optimal
/// no-feedback rate for every preparation time in the grid.
std::vector<RatePoint> enhancement_curve(double theta, double gamma,
                                         std::span<const double> t_prep_grid);

struct MICurvePoint {
    double t;
    double m;
    double err;  // quadrature tolerance or MC standard error
};

struct MICurve {
    std::vector<MICurvePoint> points;
    std::string method;  // "quadrature" | "monte-carlo"
};

inline constexpr double kQuadAbsTol = 1e-8;
inline constexpr double kGoldenRelTol = 1e-6;
inline constexpr double kSearchHorizonOverGamma = 50.0;

}  // namespace qd
