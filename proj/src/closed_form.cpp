#include "qd/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "qd/errors.hpp"
#include "qd/numerics.hpp"

namespace qd {

namespace {

// likelihood ratio helpers: L(x, w) = cosh(w) + x sinh(w), evaluated as
// e^{|w|} * (1 + x s)/2 * (1 + r (1 - x s)/(1 + x s)) with r = e^{-2|w|}
// so that posteriors never overflow.
double stable_weight(double x, double w, double sign_w) {
    // returns (1 + x tanh-ish) style factor: (1 + x s) + (1 - x s) e^{-2|w|}
    const double s = sign_w;  // +1 for w >= 0 else -1
    const double r = std::exp(-2.0 * std::abs(w));
    return (1.0 + x * s) + (1.0 - x * s) * r;
}

}  // namespace

NoFeedbackLaw::NoFeedbackLaw(const CodingEnsemble& ensemble, double gamma, double t)
    : ens_(ensemble), gamma_(gamma), t_(t) {
    if (!(t >= 0.0)) throw DomainError("NoFeedbackLaw: t must be >= 0");
    if (!(gamma > 0.0)) throw DomainError("NoFeedbackLaw: gamma must be > 0");
    xbar0_ = ens_.p1 * ens_.rho1.x + ens_.p2 * ens_.rho2.x;
    sigma_ = t > 0.0 ? 1.0 / std::sqrt(8.0 * gamma_ * t_) : 0.0;
    w_plus_ = 0.5 * (1.0 + xbar0_);
}

void NoFeedbackLaw::require_density() const {
    if (!(t_ > 0.0))
        throw DomainError("NoFeedbackLaw: density degenerate at t = 0");
}

Posterior NoFeedbackLaw::posterior(double v) const {
    const double w = 8.0 * gamma_ * t_ * v;
    const double s = w >= 0.0 ? 1.0 : -1.0;
    const double w1 = ens_.p1 * stable_weight(ens_.rho1.x, w, s);
    const double w2 = ens_.p2 * stable_weight(ens_.rho2.x, w, s);
    const double p1 = w1 / (w1 + w2);
    return Posterior{p1, 1.0 - p1};
}

Posterior NoFeedbackLaw::posterior_sigma_z(double v) const {
    const double w = 8.0 * gamma_ * t_ * v;
    const double s = w >= 0.0 ? 1.0 : -1.0;
    const double w1 = ens_.p1 * stable_weight(ens_.rho1.z, w, s);
    const double w2 = ens_.p2 * stable_weight(ens_.rho2.z, w, s);
    const double p1 = w1 / (w1 + w2);
    return Posterior{p1, 1.0 - p1};
}

double NoFeedbackLaw::density(double v) const {
    require_density();
    const double a = (v - 1.0) / sigma_;
    const double b = (v + 1.0) / sigma_;
    const double norm = 1.0 / (sigma_ * std::sqrt(2.0 * M_PI));
    return norm * (w_plus_ * std::exp(-0.5 * a * a) +
                   (1.0 - w_plus_) * std::exp(-0.5 * b * b));
}

double NoFeedbackLaw::cdf(double v) const {
    require_density();
    return w_plus_ * norm_cdf((v - 1.0) / sigma_) +
           (1.0 - w_plus_) * norm_cdf((v + 1.0) / sigma_);
}

double NoFeedbackLaw::sample(NormalStream& rng) const {
    require_density();
    const double mean = rng.next_uniform() < w_plus_ ? 1.0 : -1.0;
    return mean + sigma_ * rng.next();
}

double NoFeedbackLaw::v_for_p1(double p1) const {
    require_density();
    // p1 = p1_0 L1 / (p1_0 L1 + p2_0 L2) with L_i = cosh w + x_i sinh w
    // => tanh w = (r - 1) / (x1 - r x2), r = (p1/p1_0) (p2_0/(1 - p1))
    const double r = (p1 / ens_.p1) * (ens_.p2 / (1.0 - p1));
    double th = (r - 1.0) / (ens_.rho1.x - r * ens_.rho2.x);
    th = std::clamp(th, -1.0 + 1e-16, 1.0 - 1e-16);
    return std::atanh(th) / (8.0 * gamma_ * t_);
}

double gamma_integral(double theta0, double gamma, double t) {
    if (!(theta0 >= 0.0 && theta0 <= M_PI / 2.0))
        throw DomainError("gamma_integral: theta0 outside [0, pi/2]");
    if (!(t >= 0.0)) throw DomainError("gamma_integral: t must be >= 0");
    if (theta0 >= M_PI / 2.0 - 1e-12) return gamma * t;  // tan^2 -> inf limit
    const double T = std::tan(theta0) * std::tan(theta0);
    return 0.125 * (std::log1p(T) - std::log1p(T * std::exp(-8.0 * gamma * t)));
}

double tan_theta_t(double theta0, double gamma, double t) {
    return std::tan(theta0) * std::exp(-4.0 * gamma * t);
}

double gamma_c(double theta0, double gamma, double t) {
    const double xi = tan_theta_t(theta0, gamma, t);
    return gamma * xi * xi / (1.0 + xi * xi);
}

FeedbackLaw::FeedbackLaw(double theta0, double gamma, double t, double p1)
    : theta0_(theta0), gamma_(gamma), t_(t), p1_(p1), p2_(1.0 - p1) {
    strength_ = gamma_integral(theta0, gamma, t);
    sigma_ = strength_ > 0.0 ? 1.0 / std::sqrt(8.0 * strength_) : 0.0;
}

void FeedbackLaw::require_density() const {
    if (!(strength_ > 0.0))
        throw DomainError("FeedbackLaw: density degenerate at Gamma = 0; treat M as 0");
}

Posterior FeedbackLaw::posterior(double u) const {
    // P+ = p1 e^{8 G u} / (p1 e^{8 G u} + p2 e^{-8 G u}), in log space
    const double w = 16.0 * strength_ * u;
    if (w >= 0.0) {
        const double e = std::exp(-w);
        const double p1 = p1_ / (p1_ + p2_ * e);
        return Posterior{p1, 1.0 - p1};
    }
    const double e = std::exp(w);
    const double p2 = p2_ / (p1_ * e + p2_);
    return Posterior{1.0 - p2, p2};
}

double FeedbackLaw::density(double u) const {
    require_density();
    // preparation "+" drifts the record upward: component mean +1 carries p1
    const double a = (u - 1.0) / sigma_;
    const double b = (u + 1.0) / sigma_;
    const double norm = 1.0 / (sigma_ * std::sqrt(2.0 * M_PI));
    return norm * (p1_ * std::exp(-0.5 * a * a) + p2_ * std::exp(-0.5 * b * b));
}

double FeedbackLaw::cdf(double u) const {
    require_density();
    return p1_ * norm_cdf((u - 1.0) / sigma_) + p2_ * norm_cdf((u + 1.0) / sigma_);
}

double FeedbackLaw::sample(NormalStream& rng) const {
    require_density();
    const double mean = rng.next_uniform() < p1_ ? 1.0 : -1.0;
    return mean + sigma_ * rng.next();
}

double FeedbackLaw::u_for_p1(double p1) const {
    require_density();
    const double r = (p1 / p1_) * (p2_ / (1.0 - p1));
    return std::log(r) / (16.0 * strength_);
}

}  // namespace qd
