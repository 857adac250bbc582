#include "qd/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "qd/errors.hpp"
#include "qd/numerics.hpp"

namespace qd {

void SimConfig::validate() const {
    if (!(gamma > 0.0)) throw DomainError("SimConfig: gamma must be > 0");
    if (!(dt > 0.0)) throw DomainError("SimConfig: dt must be > 0");
    if (!(t_max > 0.0)) throw DomainError("SimConfig: t_max must be > 0");
    if (!(gamma * dt <= 1e-2)) throw DomainError("SimConfig: gamma*dt must be <= 1e-2");
    if (!(theta0 >= 0.0 && theta0 <= M_PI / 2.0))
        throw DomainError("SimConfig: theta0 outside [0, pi/2]");
    if (n_traj < 1) throw DomainError("SimConfig: n_traj must be >= 1");
    if (!(p1_0 >= 0.0 && p1_0 <= 1.0)) throw DomainError("SimConfig: p1_0 outside [0, 1]");
}

BlochIncrement sme_increment(const BlochState& rho, double dW, double dt, double gamma) {
    const double s8g = std::sqrt(8.0 * gamma);
    BlochIncrement d;
    d.dx = s8g * (1.0 - rho.x * rho.x) * dW;
    d.dy = -4.0 * gamma * rho.y * dt - s8g * rho.x * rho.y * dW;
    d.dz = -4.0 * gamma * rho.z * dt - s8g * rho.x * rho.z * dW;
    return d;
}

double record_increment(const BlochState& rho, double dW, double dt, double gamma) {
    return rho.x * dt + dW / std::sqrt(8.0 * gamma);
}

BlochIncrement coding_state_increment(const BlochState& rho_i, const BlochState& rho,
                                      double dW, double dt, double gamma) {
    const double s8g = std::sqrt(8.0 * gamma);
    const double dW_i = dW - s8g * (rho_i.x - rho.x) * dt;
    BlochIncrement d;
    d.dx = s8g * (1.0 - rho_i.x * rho_i.x) * dW_i;
    d.dy = -4.0 * gamma * rho_i.y * dt - s8g * rho_i.x * rho_i.y * dW_i;
    d.dz = -4.0 * gamma * rho_i.z * dt - s8g * rho_i.x * rho_i.z * dW_i;
    return d;
}

double bayes_increment(double p_i, const BlochState& rho_i, const BlochState& rho,
                       double dW, double gamma) {
    return std::sqrt(8.0 * gamma) * (rho_i.x - rho.x) * p_i * dW;
}

double feedback_angle(double x, double z, double p1, double p2, double dW, double dt,
                      double gamma) {
    return std::sqrt(8.0 * gamma) * z * dW + 8.0 * gamma * z * x * (p1 - p2) * dt;
}

double feedback_hamiltonian_coeff(double y_rate, double z, double x_bar, double gamma) {
    return 8.0 * gamma * (y_rate + (z - 1.0) * x_bar);
}

namespace {

double asymmetry(const BlochState& a, const BlochState& b) {
    return std::abs(a.z - b.z) + std::abs(a.x + b.x);
}

double resolve_rotation_sign() {
    // Probe step: apply one measurement increment to a symmetric pair, then
    // check which sign of feedback_angle restores the symmetry.
    const double gamma = 1.0, dt = 1e-6, dW = 3.0 * std::sqrt(dt);
    const CodingEnsemble e = coding_states(M_PI / 4.0, 0.6);
    const BlochState rho = mixture(e);
    const BlochIncrement d1 = coding_state_increment(e.rho1, rho, dW, dt, gamma);
    const BlochIncrement d2 = coding_state_increment(e.rho2, rho, dW, dt, gamma);
    BlochState s1{e.rho1.x + d1.dx, 0.0, e.rho1.z + d1.dz};
    BlochState s2{e.rho2.x + d2.dx, 0.0, e.rho2.z + d2.dz};
    const double phi =
        feedback_angle(e.rho1.x, e.rho1.z, e.p1, e.p2, dW, dt, gamma);
    const double base = asymmetry(s1, s2);
    double best_sign = 0.0, best = base;
    for (double sign : {+1.0, -1.0}) {
        const double a = asymmetry(rotate_xz(s1, sign * phi), rotate_xz(s2, sign * phi));
        if (a < best) {
            best = a;
            best_sign = sign;
        }
    }
    if (best_sign == 0.0 || best > 1e-2 * base)
        throw NumericError("feedback rotation self-test: neither sign restores symmetry");
    return best_sign;
}

}  // namespace

double feedback_rotation_sign() {
    static const double sign = resolve_rotation_sign();
    return sign;
}

namespace {

struct Stepper {
    const SimConfig& cfg;
    long traj;
    TrajectoryState s;
    double s8g;

    Stepper(const SimConfig& c, long trajectory) : cfg(c), traj(trajectory) {
        const CodingEnsemble e = coding_states(c.theta0, c.p1_0);
        s.rho1 = e.rho1;
        s.rho2 = e.rho2;
        s.p1 = e.p1;
        s.p2 = e.p2;
        s.rho = mixture(e);
        s8g = std::sqrt(8.0 * c.gamma);
        if (c.feedback) (void)feedback_rotation_sign();
    }

    void advance(double dW) {
        const double dt = cfg.dt;
        const BlochIncrement d1 = coding_state_increment(s.rho1, s.rho, dW, dt, cfg.gamma);
        const BlochIncrement d2 = coding_state_increment(s.rho2, s.rho, dW, dt, cfg.gamma);
        const double dp1 = bayes_increment(s.p1, s.rho1, s.rho, dW, cfg.gamma);
        s.y += record_increment(s.rho, dW, dt, cfg.gamma);

        // the per-step radial excursion of the raw update is O(8g dt xi^2),
        // so the blowup guard keeps 1e-3 as a floor but scales with the draw
        const double allowance =
            std::max(1e-3, 20.0 * cfg.gamma * (dt + dW * dW));
        s.rho1.x += d1.dx;
        s.rho1.z += d1.dz;
        s.rho2.x += d2.dx;
        s.rho2.z += d2.dz;
        renormalize(s.rho1, allowance);
        renormalize(s.rho2, allowance);

        double p1 = s.p1 + dp1;
        if (p1 < 0.0 || p1 > 1.0) {
            if (p1 < -1e-9 || p1 > 1.0 + 1e-9)
                throw StepError("bayes update left [0,1]", traj, s.t);
            p1 = std::clamp(p1, 0.0, 1.0);
        }
        s.p1 = p1;
        s.p2 = 1.0 - p1;

        if (cfg.feedback) {
            // exact symmetrizing rotation; equals feedback_angle to O(dt^{3/2})
            const double a1 = std::atan2(s.rho1.x, s.rho1.z);
            const double a2 = std::atan2(s.rho2.x, s.rho2.z);
            const double half = 0.5 * (a1 - a2);
            s.rho1 = BlochState{std::sin(half), 0.0, std::cos(half)};
            s.rho2 = BlochState{-s.rho1.x, 0.0, s.rho1.z};
        }
        s.rho = BlochState{s.p1 * s.rho1.x + s.p2 * s.rho2.x, 0.0,
                           s.p1 * s.rho1.z + s.p2 * s.rho2.z};
        s.t += dt;
    }

    void renormalize(BlochState& b, double allowance) const {
        const double n = b.norm();
        if (std::isnan(n) || n > 1.0 + allowance)
            throw StepError("Bloch norm blew up; halve dt", traj, s.t);
        if (n > 0.0) {
            b.x /= n;
            b.y /= n;
            b.z /= n;
        }
    }
};

}  // namespace

std::vector<TrajectoryState> simulate(const SimConfig& config, std::uint64_t traj_index) {
    config.validate();
    const auto n_steps = static_cast<std::size_t>(std::llround(config.t_max / config.dt));
    Stepper st(config, static_cast<long>(traj_index));
    NormalStream rng(config.seed, traj_index);
    std::vector<TrajectoryState> out;
    out.reserve(n_steps + 1);
    out.push_back(st.s);
    const double sqdt = std::sqrt(config.dt);
    for (std::size_t i = 0; i < n_steps; ++i) {
        st.advance(rng.next() * sqdt);
        out.push_back(st.s);
    }
    return out;
}

std::vector<double> sample_terminal_p1(const SimConfig& config) {
    config.validate();
    const auto n_steps = static_cast<std::size_t>(std::llround(config.t_max / config.dt));
    std::vector<double> out(static_cast<std::size_t>(config.n_traj));
    const double sqdt = std::sqrt(config.dt);
    parallel_for(out.size(), [&](std::size_t i) {
        Stepper st(config, static_cast<long>(i));
        NormalStream rng(config.seed, i);
        for (std::size_t k = 0; k < n_steps; ++k) st.advance(rng.next() * sqdt);
        out[i] = st.s.p1;
    });
    return out;
}

std::vector<std::vector<double>> sample_p1_at(const SimConfig& config,
                                              const std::vector<double>& times) {
    config.validate();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(config.n_traj));
    const double sqdt = std::sqrt(config.dt);
    parallel_for(out.size(), [&](std::size_t i) {
        Stepper st(config, static_cast<long>(i));
        NormalStream rng(config.seed, i);
        std::vector<double>& row = out[i];
        row.reserve(times.size());
        for (double target : times) {
            while (st.s.t < target - 0.5 * config.dt) st.advance(rng.next() * sqdt);
            row.push_back(st.s.p1);
        }
    });
    return out;
}

double mixture_divergence_step(const TrajectoryState& s, double dW, double dt,
                               double gamma) {
    const BlochIncrement dr = sme_increment(s.rho, dW, dt, gamma);
    const BlochIncrement d1 = coding_state_increment(s.rho1, s.rho, dW, dt, gamma);
    const BlochIncrement d2 = coding_state_increment(s.rho2, s.rho, dW, dt, gamma);
    const double dp1 = bayes_increment(s.p1, s.rho1, s.rho, dW, gamma);
    const double dp2 = bayes_increment(s.p2, s.rho2, s.rho, dW, gamma);
    const double mx = (s.p1 + dp1) * (s.rho1.x + d1.dx) + (s.p2 + dp2) * (s.rho2.x + d2.dx);
    const double mz = (s.p1 + dp1) * (s.rho1.z + d1.dz) + (s.p2 + dp2) * (s.rho2.z + d2.dz);
    return std::max(std::abs(mx - (s.rho.x + dr.dx)), std::abs(mz - (s.rho.z + dr.dz)));
}

}  // namespace qd
