#include "qd/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qd/bloch.hpp"
#include "qd/capacity.hpp"
#include "qd/closed_form.hpp"
#include "qd/errors.hpp"
#include "qd/numerics.hpp"
#include "qd/trajectory.hpp"
#include "qd/weak.hpp"

namespace qd {

namespace {

std::string fmt(double v) { return format_double(v, 12); }
std::string fmt_exact(double v) { return format_double(v, 17); }

std::string feedback_name(FeedbackMode m) {
    switch (m) {
        case FeedbackMode::Off: return "off";
        case FeedbackMode::On: return "on";
        default: return "both";
    }
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
    return v;
}

}  // namespace

std::string ExperimentSpec::canonical() const {
    std::ostringstream os;
    os << "command=" << command << ";gamma=" << fmt_exact(gamma)
       << ";dt=" << fmt_exact(dt) << ";t_max=" << fmt_exact(t_max)
       << ";n_traj=" << n_traj << ";seed=" << seed << ";thetas=";
    for (std::size_t i = 0; i < thetas.size(); ++i)
        os << (i ? "," : "") << fmt_exact(thetas[i]);
    os << ";t_prep=" << fmt_exact(t_prep_min) << ":" << fmt_exact(t_prep_max) << ":"
       << t_prep_points << ";feedback=" << feedback_name(feedback)
       << ";format=" << format << ";sigma_z=" << (debug_sigma_z ? 1 : 0);
    return os.str();
}

std::uint64_t ExperimentSpec::content_hash() const { return fnv1a(canonical()); }

ExperimentSpec resolve_defaults(ExperimentSpec s) {
    if (s.thetas.empty()) {
        if (s.command == "fig1")
            s.thetas = {M_PI / 8.0, M_PI / 4.0, 3.0 * M_PI / 8.0};
        else if (s.command == "fig2")
            s.thetas = {M_PI / 8.0, 3.0 * M_PI / 8.0};
        else if (s.command == "fig3")
            s.thetas = {M_PI / 32.0, M_PI / 16.0, M_PI / 8.0};
        else
            s.thetas = {M_PI / 4.0};
    }
    if (s.command == "fig1") s.t_max = 5.0 / s.gamma;
    if (s.command == "fig2") s.t_max = 2.0 / s.gamma;
    return s;
}

// ---------------------------------------------------------------------------

ExperimentResult run_fig1(const ExperimentSpec& spec) {
    ExperimentResult r;
    r.spec = spec;
    Table t;
    t.name = "fig1";
    t.columns = {"theta", "gt", "m_quad", "m_opt"};
    const auto gts = linspace(0.0, spec.gamma * spec.t_max, 101);
    for (double theta : spec.thetas) {
        const double mo = optimal_mutual_info(theta);
        std::vector<std::vector<double>> rows(gts.size());
        parallel_for(gts.size(), [&](std::size_t i) {
            double m;
            try {
                m = mutual_info_nofb(theta, spec.gamma, gts[i] / spec.gamma);
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " [theta=" + fmt(theta) +
                                   ", gt=" + fmt(gts[i]) + "]");
            }
            rows[i] = {theta, gts[i], m, mo};
        });
        for (auto& row : rows) t.rows.push_back(std::move(row));
        r.notes.push_back("theta=" + fmt(theta) + ": M(gt=" + fmt(gts.back()) +
                          ")=" + fmt(t.rows.back()[2]) + " vs M_opt=" + fmt(mo));
    }
    r.tables.push_back(std::move(t));
    return r;
}

ExperimentResult run_fig2(const ExperimentSpec& spec) {
    ExperimentResult r;
    r.spec = spec;
    Table t;
    t.name = "fig2";
    t.columns = {"theta", "gt", "m_nofb", "m_fb", "m_opt"};
    const auto gts = linspace(0.0, spec.gamma * spec.t_max, 81);
    for (double theta : spec.thetas) {
        const double mo = optimal_mutual_info(theta);
        std::vector<std::vector<double>> rows(gts.size());
        parallel_for(gts.size(), [&](std::size_t i) {
            try {
                const double t_i = gts[i] / spec.gamma;
                rows[i] = {theta, gts[i], mutual_info_nofb(theta, spec.gamma, t_i),
                           mutual_info_fb(theta, spec.gamma, t_i), mo};
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " [theta=" + fmt(theta) +
                                   ", gt=" + fmt(gts[i]) + "]");
            }
        });
        double max_gain = -1.0, max_gap = 0.0;
        for (auto& row : rows) {
            max_gain = std::max(max_gain, row[3] - row[2]);
            max_gap = std::max(max_gap, std::abs(row[3] - row[2]));
            t.rows.push_back(std::move(row));
        }
        r.notes.push_back("theta=" + fmt(theta) + ": max(M_fb-M_nofb)=" + fmt(max_gain) +
                          ", max|gap|/M_opt=" + fmt(max_gap / mo));
    }
    r.tables.push_back(std::move(t));
    return r;
}

ExperimentResult run_fig3(const ExperimentSpec& spec) {
    ExperimentResult r;
    r.spec = spec;
    Table t;
    t.name = "fig3";
    t.columns = {"theta", "gt_prep", "percent_increase"};
    const auto grid =
        logspace(spec.t_prep_min / spec.gamma, spec.t_prep_max / spec.gamma,
                 spec.t_prep_points);
    for (double theta : spec.thetas) {
        const auto curve = enhancement_curve(theta, spec.gamma, grid);
        std::size_t peak = 0;
        for (std::size_t i = 0; i < curve.size(); ++i)
            if (curve[i].percent_increase > curve[peak].percent_increase) peak = i;
        // refine the peak between the neighbouring grid points
        const double lo = grid[peak == 0 ? 0 : peak - 1];
        const double hi = grid[std::min(peak + 1, grid.size() - 1)];
        const auto pct = [&](double tp) {
            const RatePoint off = optimal_rate(theta, spec.gamma, tp, false);
            const RatePoint on = optimal_rate(theta, spec.gamma, tp, true);
            return 100.0 * (on.rate - off.rate) / off.rate;
        };
        const GoldenResult g = lo < hi ? golden_max(pct, lo, hi, 1e-4)
                                       : GoldenResult{grid[peak], 0.0, false};
        const double peak_pct = lo < hi ? g.f : curve[peak].percent_increase;
        const double peak_at = lo < hi ? g.x : grid[peak];
        for (std::size_t i = 0; i < curve.size(); ++i)
            t.rows.push_back({theta, spec.gamma * grid[i], curve[i].percent_increase});
        r.notes.push_back("theta=" + fmt(theta) + ": peak " + fmt(peak_pct) +
                          "% at gamma*t_prep=" + fmt(spec.gamma * peak_at));
    }
    r.tables.push_back(std::move(t));
    return r;
}

ExperimentResult run_traj(const ExperimentSpec& spec) {
    ExperimentResult r;
    r.spec = spec;
    const bool fb = spec.feedback == FeedbackMode::On;
    SimConfig cfg{spec.gamma, spec.dt, spec.t_max, spec.thetas.front(),
                  fb, spec.seed, spec.n_traj, 0.5};
    cfg.validate();
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));

    std::vector<RunningStats> p1_stats(n_steps + 1);
    const int chunk = 256;
    for (int base = 0; base < spec.n_traj; base += chunk) {
        const int count = std::min(chunk, spec.n_traj - base);
        std::vector<std::vector<TrajectoryState>> series(count);
        parallel_for(count, [&](std::size_t i) {
            series[i] = simulate(cfg, static_cast<std::uint64_t>(base) + i);
        });
        for (int i = 0; i < count; ++i) {  // sequential merge keeps bytes stable
            for (std::size_t k = 0; k <= n_steps; ++k)
                p1_stats[k].add(series[i][k].p1);
            Table t;
            std::ostringstream nm;
            nm << "traj_" << std::setw(3) << std::setfill('0') << base + i;
            t.name = nm.str();
            t.columns = {"t", "x", "z", "x1", "z1", "x2", "z2", "p1", "y"};
            for (const TrajectoryState& s : series[i])
                t.rows.push_back({s.t, s.rho.x, s.rho.z, s.rho1.x, s.rho1.z, s.rho2.x,
                                  s.rho2.z, s.p1, s.y});
            r.tables.push_back(std::move(t));
        }
    }
    Table summary;
    summary.name = "traj_summary";
    summary.columns = {"t", "p1_mean", "p1_var"};
    for (std::size_t k = 0; k <= n_steps; ++k)
        summary.rows.push_back(
            {k * cfg.dt, p1_stats[k].mean(), p1_stats[k].variance()});
    r.tables.push_back(std::move(summary));
    r.notes.push_back("n_traj=" + std::to_string(spec.n_traj) +
                      " feedback=" + feedback_name(spec.feedback));
    return r;
}

// --------------------------- validation suites -----------------------------

namespace {

SuiteOutcome suite(const std::string& name, double stat, double thr, bool pass,
                   std::string note = {}) {
    return SuiteOutcome{name, stat, thr, pass, std::move(note)};
}

// analytic CDF of the terminal p1 under the no-feedback law
std::function<double(double)> p1_cdf_nofb(const NoFeedbackLaw& law) {
    return [&law](double p) { return law.cdf(law.v_for_p1(p)); };
}

std::function<double(double)> p1_cdf_fb(const FeedbackLaw& law) {
    return [&law](double p) { return law.cdf(law.u_for_p1(p)); };
}

std::vector<double> weak_chain_p1(const CodingEnsemble& e0, double k, int n_steps,
                                  int n_samples, std::uint64_t seed) {
    std::vector<double> out(n_samples);
    const WeakMeasurement m = weak_operators(k);
    parallel_for(out.size(), [&](std::size_t i) {
        NormalStream rng(seed, i);
        BlochState s1 = e0.rho1, s2 = e0.rho2;
        double p1 = e0.p1, p2 = e0.p2;
        for (int step = 0; step < n_steps; ++step) {
            const WeakOutcome plus1 = apply_weak(s1, m, +1);
            const WeakOutcome plus2 = apply_weak(s2, m, +1);
            const double q_plus = p1 * plus1.probability + p2 * plus2.probability;
            if (rng.next_uniform() < q_plus) {
                p1 = p1 * plus1.probability / q_plus;
                s1 = plus1.state;
                s2 = plus2.state;
            } else {
                const WeakOutcome minus1 = apply_weak(s1, m, -1);
                const WeakOutcome minus2 = apply_weak(s2, m, -1);
                p1 = p1 * minus1.probability / (1.0 - q_plus);
                s1 = minus1.state;
                s2 = minus2.state;
            }
            p2 = 1.0 - p1;
        }
        out[i] = p1;
    });
    return out;
}

}  // namespace

ExperimentResult run_validate(const ExperimentSpec& spec) {
    ExperimentResult r;
    r.spec = spec;
    const double gamma = spec.gamma;
    const int n = spec.n_traj;

    // completeness identity on a 101-point k grid
    {
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const WeakMeasurement m = weak_operators(i / 100.0);
            worst = std::max(worst, std::abs(2.0 * (m.a * m.a + m.b * m.b) - 1.0));
        }
        r.suites.push_back(suite("weak_completeness", worst, 1e-14, worst <= 1e-14));
    }

    // strength-density calibration:一-step variance of x must match the SME
    // rate 8 gamma (1-x^2)^2 for k = 1/2 - sqrt(2 gamma dt), dt-independent
    {
        const double x = 0.3;
        double worst = 0.0;
        for (double dt : {1e-5 / gamma, 1e-4 / gamma, 1e-3 / gamma}) {
            const ContinuumSchedule sched{epsilon_for(gamma), dt};
            const WeakMeasurement m = weak_operators(sched.k());
            const BlochState s{x, 0.0, std::sqrt(1.0 - x * x)};
            double mean = 0.0, second = 0.0;
            for (int sgn : {+1, -1}) {
                const WeakOutcome o = apply_weak(s, m, sgn);
                const double diff = o.state.x - x;
                mean += o.probability * diff;
                second += o.probability * diff * diff;
            }
            const double var = second - mean * mean;
            const double fitted = var / ((1.0 - x * x) * (1.0 - x * x) * dt);
            worst = std::max(worst, std::abs(fitted / (8.0 * gamma) - 1.0));
        }
        r.suites.push_back(suite("epsilon_calibration", worst, 2e-2, worst <= 2e-2,
                                 "epsilon = 2 gamma"));
    }

    // exact outcome tree vs sampled weak-measurement chains
    {
        const CodingEnsemble e = coding_states(M_PI / 4.0);
        const double mi_tree = weak_sequence_mi(e, 0.8, 10);
        const auto p1s = weak_chain_p1(e, 0.8, 10, 20000, spec.seed + 11);
        const MeanStderr mc = mutual_info_mc(p1s);
        const double dev = std::abs(mc.mean - mi_tree) / mc.stderr;
        r.suites.push_back(suite("tree_vs_mc", dev, 2.0, dev <= 2.0,
                                 "tree=" + fmt(mi_tree) + " mc=" + fmt(mc.mean)));
    }

    // discrete weak chain vs SME at matched total strength (gt = 0.1)
    {
        const double t = 0.1 / gamma;
        const int steps = 4000;
        const ContinuumSchedule sched{epsilon_for(gamma), t / steps};
        auto weak_p1 = weak_chain_p1(coding_states(M_PI / 4.0), sched.k(), steps, n,
                                     spec.seed + 21);
        SimConfig cfg{gamma, 1e-4 / gamma, t, M_PI / 4.0, false, spec.seed + 22, n, 0.5};
        auto sme_p1 = sample_terminal_p1(cfg);
        const double d = ks_two_sample(std::move(weak_p1), std::move(sme_p1));
        const double crit = ks_critical_two_sample(0.01, n, n);
        r.suites.push_back(suite("weak_vs_sme_ks", d, crit, d < crit));
    }

    // closed form vs SME trajectories, no feedback
    for (double theta : {M_PI / 8.0, M_PI / 4.0}) {
        SimConfig cfg{gamma, 1e-4 / gamma, 1.0 / gamma, theta, false,
                      spec.seed + 31 + static_cast<std::uint64_t>(theta * 100), n, 0.5};
        const std::vector<double> gts = {0.1, 0.5, 1.0};
        std::vector<double> times;
        for (double gt : gts) times.push_back(gt / gamma);
        const auto snaps = sample_p1_at(cfg, times);
        // KS at gt = 0.1 (at larger gt the posterior law is nearly atomic at
        // the quantum bound and the EM path error dominates the statistic;
        // see the ledger note on acceptance criterion 3)
        {
            std::vector<double> p1s(snaps.size());
            for (std::size_t i = 0; i < snaps.size(); ++i) p1s[i] = snaps[i][0];
            const NoFeedbackLaw law(coding_states(theta), gamma, times[0]);
            const auto cdf = spec.debug_sigma_z
                                 ? std::function<double(double)>([&law](double p) {
                                       // sigma_z posteriors never move off the
                                       // prior, so invert against the prior
                                       return p < 0.5 ? 0.0 : 1.0;
                                   })
                                 : p1_cdf_nofb(law);
            const double d = ks_statistic(p1s, cdf);
            const double crit = ks_critical(0.01, p1s.size());
            r.suites.push_back(suite("closed_form_ks_nofb_theta=" + fmt(theta), d, crit,
                                     d < crit, "gt=0.1"));
        }
        for (std::size_t k = 0; k < gts.size(); ++k) {
            std::vector<double> p1s(snaps.size());
            for (std::size_t i = 0; i < snaps.size(); ++i) p1s[i] = snaps[i][k];
            const MeanStderr mc = mutual_info_mc(p1s);
            const double mq = mutual_info_nofb(theta, gamma, times[k]);
            const double dev = std::abs(mc.mean - mq) / mc.stderr;
            // 3 se: two dozen simultaneous checks, so a 2 se bound would
            // false-alarm on most runs
            r.suites.push_back(suite(
                "mi_mc_vs_quad_nofb_theta=" + fmt(theta) + "_gt=" + fmt(gts[k]), dev,
                3.0, dev <= 3.0, "mc=" + fmt(mc.mean) + " quad=" + fmt(mq)));
        }
    }

    // unequal priors pin the outcome-variable orientation
    {
        SimConfig cfg{gamma, 1e-4 / gamma, 0.1 / gamma, M_PI / 4.0, false,
                      spec.seed + 41, n, 0.7};
        auto p1s = sample_terminal_p1(cfg);
        const NoFeedbackLaw law(coding_states(M_PI / 4.0, 0.7), gamma, 0.1 / gamma);
        const double d = ks_statistic(std::move(p1s), p1_cdf_nofb(law));
        const double crit = ks_critical(0.01, n);
        r.suites.push_back(suite("closed_form_ks_unequal_priors", d, crit, d < crit));
    }

    // closed form vs trajectories with feedback
    for (double theta : {M_PI / 8.0, 3.0 * M_PI / 8.0}) {
        SimConfig cfg{gamma, 1e-4 / gamma, 1.0 / gamma, theta, true,
                      spec.seed + 51 + static_cast<std::uint64_t>(theta * 100), n, 0.5};
        const std::vector<double> gts = {0.1, 0.5, 1.0};
        std::vector<double> times;
        for (double gt : gts) times.push_back(gt / gamma);
        const auto snaps = sample_p1_at(cfg, times);
        for (std::size_t k = 0; k < gts.size(); ++k) {
            std::vector<double> p1s(snaps.size());
            for (std::size_t i = 0; i < snaps.size(); ++i) p1s[i] = snaps[i][k];
            const FeedbackLaw law(theta, gamma, times[k]);
            const double d = ks_statistic(p1s, p1_cdf_fb(law));
            const double crit = ks_critical(0.01, p1s.size());
            r.suites.push_back(suite(
                "closed_form_ks_fb_theta=" + fmt(theta) + "_gt=" + fmt(gts[k]), d, crit,
                d < crit));
            const MeanStderr mc = mutual_info_mc(p1s);
            const double mq = mutual_info_fb(theta, gamma, times[k]);
            const double dev = std::abs(mc.mean - mq) / mc.stderr;
            r.suites.push_back(suite(
                "mi_mc_vs_quad_fb_theta=" + fmt(theta) + "_gt=" + fmt(gts[k]), dev, 3.0,
                dev <= 3.0, "mc=" + fmt(mc.mean) + " quad=" + fmt(mq)));
        }
    }

    // martingale E[P1(t)] = P1(0)
    {
        SimConfig cfg{gamma, 1e-4 / gamma, 1.0 / gamma, M_PI / 4.0, false,
                      spec.seed + 61, n, 0.5};
        const auto snaps = sample_p1_at(cfg, {0.1 / gamma, 1.0 / gamma});
        for (std::size_t k = 0; k < 2; ++k) {
            RunningStats st;
            for (const auto& row : snaps) st.add(row[k]);
            const double dev = std::abs(st.mean() - 0.5) / st.stderr_mean();
            r.suites.push_back(suite("martingale_gt=" + fmt(k == 0 ? 0.1 : 1.0), dev,
                                     3.0, dev <= 3.0, "mean=" + fmt(st.mean())));
        }
    }

    // mixture consistency along a trajectory + dual-route dt scaling
    {
        SimConfig cfg{gamma, 1e-4 / gamma, 1.0 / gamma, M_PI / 4.0, false,
                      spec.seed + 71, 1, 0.5};
        const auto series = simulate(cfg, 0);
        double worst = 0.0;
        for (const TrajectoryState& s : series) {
            const double rx = s.p1 * s.rho1.x + s.p2 * s.rho2.x;
            const double rz = s.p1 * s.rho1.z + s.p2 * s.rho2.z;
            worst = std::max(worst,
                             std::max(std::abs(s.rho.x - rx), std::abs(s.rho.z - rz)));
        }
        r.suites.push_back(suite("mixture_consistency", worst, 1e-6, worst <= 1e-6));

        // one-step rho-route vs mixture-route divergence halves with dt
        const TrajectoryState& probe = series[series.size() / 3];
        double div1 = 0.0, div2 = 0.0;
        for (double xi : {-1.5, -0.5, 0.5, 1.5}) {
            const double dt1 = cfg.dt, dt2 = 2.0 * cfg.dt;
            div1 += mixture_divergence_step(probe, xi * std::sqrt(dt1), dt1, gamma);
            div2 += mixture_divergence_step(probe, xi * std::sqrt(dt2), dt2, gamma);
        }
        const double ratio = div2 / div1;
        r.suites.push_back(suite("mixture_divergence_dt_scaling", ratio, 2.0,
                                 ratio > 1.6 && ratio < 2.4,
                                 "expected ~2 (linear in dt)"));
    }

    // feedback keeps the coding states symmetric and theta(t) deterministic
    {
        SimConfig cfg{gamma, 1e-5 / gamma, 1.0 / gamma, M_PI / 4.0, true,
                      spec.seed + 81, 1, 0.5};
        const auto series = simulate(cfg, 0);
        double worst = 0.0;
        for (const TrajectoryState& s : series)
            worst = std::max(worst, std::abs(s.rho1.z - s.rho2.z) +
                                        std::abs(s.rho1.x + s.rho2.x));
        r.suites.push_back(suite("feedback_symmetry", worst, 1e-8, worst <= 1e-8));
        const TrajectoryState& last = series.back();
        const double ratio = (last.rho1.x / last.rho1.z) / std::tan(cfg.theta0);
        const double expect = std::exp(-4.0 * gamma * cfg.t_max);
        const double rel = std::abs(ratio / expect - 1.0);
        r.suites.push_back(suite("feedback_tan_decay", rel, 1e-3, rel <= 1e-3,
                                 "tan ratio=" + fmt(ratio) + " e^{-4gt}=" + fmt(expect)));
    }

    // negative control: the sigma_z exponent variant must be rejected
    {
        SimConfig cfg{gamma, 1e-4 / gamma, 0.1 / gamma, M_PI / 4.0, false,
                      spec.seed + 91, n, 0.5};
        auto p1s = sample_terminal_p1(cfg);
        const NoFeedbackLaw law(coding_states(M_PI / 4.0), gamma, 0.1 / gamma);
        const auto corrupted_cdf = [&law](double p) {
            // sigma_z likelihoods coincide for the symmetric pair, so the
            // "posterior" stays at the prior; its CDF is a step at 1/2
            const Posterior q = law.posterior_sigma_z(0.0);
            return p < q.p1 ? 0.0 : 1.0;
        };
        const double d = ks_statistic(std::move(p1s), corrupted_cdf);
        const double crit = ks_critical(0.01, n);
        r.suites.push_back(suite("negative_control_sigma_z", d, crit, d > crit,
                                 "corrupted exponent must FAIL the KS test"));
    }

    Table t;
    t.name = "validate";
    t.columns = {"suite", "statistic", "threshold", "passed"};
    for (std::size_t i = 0; i < r.suites.size(); ++i) {
        const SuiteOutcome& s = r.suites[i];
        t.rows.push_back({static_cast<double>(i), s.statistic, s.threshold,
                          s.passed ? 1.0 : 0.0});
        r.notes.push_back("suite " + std::to_string(i) + " " + s.name + ": " +
                          (s.passed ? "PASS" : "FAIL") + " (stat=" + fmt(s.statistic) +
                          ", thr=" + fmt(s.threshold) +
                          (s.note.empty() ? "" : ", " + s.note) + ")");
        r.ok = r.ok && s.passed;
    }
    r.tables.push_back(std::move(t));
    return r;
}

ExperimentResult run_command(const ExperimentSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult r;
    if (spec.command == "fig1")
        r = run_fig1(spec);
    else if (spec.command == "fig2")
        r = run_fig2(spec);
    else if (spec.command == "fig3")
        r = run_fig3(spec);
    else if (spec.command == "traj")
        r = run_traj(spec);
    else if (spec.command == "validate")
        r = run_validate(spec);
    else
        throw DomainError("unknown command: " + spec.command);
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ------------------------------ serialization ------------------------------

namespace {

std::string header_block(const ExperimentResult& r, const Table& t) {
    std::ostringstream os;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(r.spec.content_hash()));
    os << "# " << kVersion << "\n"
       << "# command: " << r.spec.command << "\n"
       << "# spec: " << r.spec.canonical() << "\n"
       << "# spec_hash: " << hash << "\n"
       << "# seed: " << r.spec.seed << "\n"
       << "# tolerances: quad_abs=" << fmt(kQuadAbsTol)
       << " golden_rel=" << fmt(kGoldenRelTol) << " pure_tol=1e-12\n"
       << "# columns: ";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    return os.str();
}

}  // namespace

std::string table_csv(const ExperimentResult& r, const Table& t) {
    std::ostringstream os;
    os << header_block(r, t);
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
        os << "\n";
    }
    return os.str();
}

std::string result_json(const ExperimentResult& r) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["command"] = r.spec.command;
    j["spec"] = r.spec.canonical();
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(r.spec.content_hash()));
    j["spec_hash"] = hash;
    j["seed"] = r.spec.seed;
    j["tolerances"] = {{"quad_abs", kQuadAbsTol}, {"golden_rel", kGoldenRelTol}};
    j["notes"] = r.notes;
    if (!r.suites.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& s : r.suites)
            arr.push_back({{"name", s.name},
                           {"statistic", s.statistic},
                           {"threshold", s.threshold},
                           {"passed", s.passed},
                           {"note", s.note}});
        j["suites"] = arr;
    }
    auto tables = nlohmann::ordered_json::array();
    for (const Table& t : r.tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = t.rows;
        tables.push_back(jt);
    }
    j["tables"] = tables;
    return j.dump(1) + "\n";
}

std::string plot_script(const ExperimentResult& r) {
    std::ostringstream os;
    os << "# gnuplot script generated by " << kVersion << "; run: gnuplot -p "
       << r.spec.command << ".gp\n"
       << "set datafile separator ','\n"
       << "set xlabel 'gamma t'\n"
       << "set key left bottom\n";
    const std::string csv = r.spec.command + ".csv";
    if (r.spec.command == "fig1") {
        os << "set ylabel 'M(t) [nats]'\nplot ";
        for (std::size_t i = 0; i < r.spec.thetas.size(); ++i) {
            const std::string th = fmt(r.spec.thetas[i]);
            os << (i ? ", " : "") << "'" << csv << "' using 2:($1==" << th
               << "?$3:1/0) with lines title 'theta=" << th << "', '" << csv
               << "' using 2:($1==" << th << "?$4:1/0) with lines dt 2 notitle";
        }
        os << "\n";
    } else if (r.spec.command == "fig2") {
        os << "set ylabel 'M(t) [nats]'\nplot ";
        for (std::size_t i = 0; i < r.spec.thetas.size(); ++i) {
            const std::string th = fmt(r.spec.thetas[i]);
            os << (i ? ", " : "") << "'" << csv << "' using 2:($1==" << th
               << "?$3:1/0) with lines title 'no fb, theta=" << th << "', '" << csv
               << "' using 2:($1==" << th << "?$4:1/0) with lines dt 2 title 'fb', '"
               << csv << "' using 2:($1==" << th << "?$5:1/0) with lines dt 3 notitle";
        }
        os << "\n";
    } else if (r.spec.command == "fig3") {
        os << "set ylabel 'rate increase [%]'\nset logscale x\n"
           << "set xlabel 'gamma t_prep'\nplot ";
        for (std::size_t i = 0; i < r.spec.thetas.size(); ++i) {
            const std::string th = fmt(r.spec.thetas[i]);
            os << (i ? ", " : "") << "'" << csv << "' using 2:($1==" << th
               << "?$3:1/0) with lines title 'theta=" << th << "'";
        }
        os << "\n";
    } else {
        os << "# no plot defined for command " << r.spec.command << "\n";
    }
    return os.str();
}

std::vector<std::string> write_result(const ExperimentResult& r) {
    namespace fs = std::filesystem;
    fs::create_directories(r.spec.out_dir);
    std::vector<std::string> written;
    for (const Table& t : r.tables) {
        const fs::path p = fs::path(r.spec.out_dir) / (t.name + ".csv");
        std::ofstream f(p, std::ios::binary);
        f << table_csv(r, t);
        written.push_back(p.string());
    }
    if (r.spec.format == "json") {
        const fs::path p = fs::path(r.spec.out_dir) / (r.spec.command + ".json");
        std::ofstream f(p, std::ios::binary);
        f << result_json(r);
        written.push_back(p.string());
    }
    if (r.spec.emit_plot) {
        const fs::path p = fs::path(r.spec.out_dir) / (r.spec.command + ".gp");
        std::ofstream f(p, std::ios::binary);
        f << plot_script(r);
        written.push_back(p.string());
    }
    return written;
}

double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') s += c;
    try {
        const std::size_t pos = s.find("pi");
        if (pos == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw DomainError("parse_angle: cannot parse '" + text + "'");
            return v;
        }
        double coef = 1.0;
        if (pos > 0) coef = std::stod(s.substr(0, pos));
        double den = 1.0;
        if (pos + 2 < s.size()) {
            if (s[pos + 2] != '/')
                throw DomainError("parse_angle: cannot parse '" + text + "'");
            den = std::stod(s.substr(pos + 3));
        }
        return coef * M_PI / den;
    } catch (const std::invalid_argument&) {
        throw DomainError("parse_angle: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
        throw DomainError("parse_angle: cannot parse '" + text + "'");
    }
}

}  // namespace qd
