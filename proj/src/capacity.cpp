#include "qd/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "qd/bloch.hpp"
#include "qd/closed_form.hpp"
#include "qd/errors.hpp"

namespace qd {

namespace {

// breakpoints bracketing the two Gaussian humps at +-1 with std dev sigma
std::vector<double> hump_breakpoints(double sigma) {
    std::vector<double> pts = {-1.0 - 10.0 * sigma, -1.0 + 10.0 * sigma,
                               1.0 - 10.0 * sigma, 1.0 + 10.0 * sigma};
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace

double mutual_info_nofb(double theta, double gamma, double t) {
    if (!(t >= 0.0)) throw DomainError("mutual_info_nofb: t must be >= 0");
    if (t == 0.0) return 0.0;
    const NoFeedbackLaw law(coding_states(theta), gamma, t);
    const auto integrand = [&](double v) {
        return binary_entropy(law.posterior(v).p1) * law.density(v);
    };
    const auto pts = hump_breakpoints(law.sigma());
    const double eh = adaptive_simpson_segments(integrand, pts, kQuadAbsTol);
    return std::log(2.0) - eh;
}

double mutual_info_fb(double theta0, double gamma, double t) {
    if (!(t >= 0.0)) throw DomainError("mutual_info_fb: t must be >= 0");
    const double strength = t > 0.0 ? gamma_integral(theta0, gamma, t) : 0.0;
    if (strength <= 0.0) return 0.0;
    const FeedbackLaw law(theta0, gamma, t);
    const auto integrand = [&](double u) {
        return binary_entropy(law.posterior(u).p1) * law.density(u);
    };
    const auto pts = hump_breakpoints(law.sigma());
    const double eh = adaptive_simpson_segments(integrand, pts, kQuadAbsTol);
    return std::log(2.0) - eh;
}

MeanStderr mutual_info_mc(std::span<const double> p1_samples) {
    if (p1_samples.size() < 100)
        throw DomainError("mutual_info_mc: need >= 100 samples");
    std::vector<double> h(p1_samples.size());
    for (std::size_t i = 0; i < p1_samples.size(); ++i)
        h[i] = binary_entropy(p1_samples[i]);
    MeanStderr ms = jackknife_mean(h);
    return MeanStderr{std::log(2.0) - ms.mean, ms.stderr, ms.n};
}

double transmission_rate(double m_nats, double t_prep, double t_meas) {
    if (!(t_prep > 0.0 && t_meas > 0.0))
        throw DomainError("transmission_rate: times must be > 0");
    return m_nats / std::max(t_prep, t_meas);
}

RatePoint optimal_rate(double theta, double gamma, double t_prep, bool feedback) {
    if (!(t_prep > 0.0)) throw DomainError("optimal_rate: t_prep must be > 0");
    const auto m_of = [&](double t) {
        return feedback ? mutual_info_fb(theta, gamma, t)
                        : mutual_info_nofb(theta, gamma, t);
    };
    // M is nondecreasing, so t < t_prep never beats t = t_prep
    const double hi = kSearchHorizonOverGamma / gamma;
    const auto rate = [&](double t) { return m_of(t) / t; };
    const GoldenResult res = golden_max(rate, t_prep, std::max(hi, t_prep * 2.0),
                                        kGoldenRelTol);
    RatePoint out;
    out.t_prep = t_prep;
    out.t_meas_opt = res.x;
    out.rate = res.f;
    out.fallback_used = res.fallback_used;
    return out;
}

std::vector<RatePoint> enhancement_curve(double theta, double gamma,
                                         std::span<const double> t_prep_grid) {
    std::vector<RatePoint> out(t_prep_grid.size());
    parallel_for(t_prep_grid.size(), [&](std::size_t i) {
        const RatePoint off = optimal_rate(theta, gamma, t_prep_grid[i], false);
        RatePoint on = optimal_rate(theta, gamma, t_prep_grid[i], true);
        on.percent_increase = 100.0 * (on.rate - off.rate) / off.rate;
        out[i] = on;
    });
    return out;
}

}  // namespace qd
