#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qd/errors.hpp"
#include "qd/experiments.hpp"

namespace {

// exit codes: 0 success, 2 validation failure, 3 numeric error, 4 bad arguments
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 4;

void add_common_options(CLI::App* cmd, qd::ExperimentSpec& spec,
                        std::vector<std::string>& theta_args, std::string& feedback) {
    cmd->add_option("--theta", theta_args,
                    "coding half-angle, radians or fractions like pi/8 (repeatable)");
    cmd->add_option("--gamma", spec.gamma, "measurement strength (default 1)");
    cmd->add_option("--dt", spec.dt, "integrator step");
    cmd->add_option("--t-max", spec.t_max, "time horizon");
    cmd->add_option("--n-traj", spec.n_traj, "number of trajectories");
    cmd->add_option("--seed", spec.seed, "master seed");
    cmd->add_option("--t-prep-min", spec.t_prep_min, "preparation-time grid start (gamma*t)");
    cmd->add_option("--t-prep-max", spec.t_prep_max, "preparation-time grid end (gamma*t)");
    cmd->add_option("--t-prep-points", spec.t_prep_points, "preparation-time grid size");
    cmd->add_option("--feedback", feedback, "on|off|both")
        ->check(CLI::IsMember({"on", "off", "both"}));
    cmd->add_option("--out", spec.out_dir, "output directory");
    cmd->add_option("--format", spec.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--emit-plot", spec.emit_plot, "write a gnuplot script next to the CSV");
    cmd->add_flag("--debug-sigma-z", spec.debug_sigma_z, "")->group("");  // hidden
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-measurement state discrimination experiments"};
    app.require_subcommand(1);

    qd::ExperimentSpec spec;
    std::vector<std::string> theta_args;
    std::string feedback = "off";

    for (const char* name : {"fig1", "fig2", "fig3", "traj", "validate"}) {
        CLI::App* cmd = app.add_subcommand(name, "");
        add_common_options(cmd, spec, theta_args, feedback);
    }
    app.get_subcommand("fig1")->description("mutual information vs measurement time");
    app.get_subcommand("fig2")->description("feedback vs no-feedback information curves");
    app.get_subcommand("fig3")->description("transmission-rate enhancement vs preparation time");
    app.get_subcommand("traj")->description("dump individual trajectories");
    app.get_subcommand("validate")->description("run the oracle/validation suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        spec.command = app.get_subcommands().front()->get_name();
        for (const std::string& t : theta_args)
            spec.thetas.push_back(qd::parse_angle(t));
        if (feedback == "on")
            spec.feedback = qd::FeedbackMode::On;
        else if (feedback == "both")
            spec.feedback = qd::FeedbackMode::Both;
        spec = qd::resolve_defaults(spec);

        // default dt in 1/gamma units when not explicitly set
        if (spec.dt == 1e-4 && spec.gamma != 1.0) spec.dt = 1e-4 / spec.gamma;

        const qd::ExperimentResult result = qd::run_command(spec);
        const auto paths = qd::write_result(result);
        for (const std::string& note : result.notes) std::printf("%s\n", note.c_str());
        for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
        std::printf("wall time: %.2fs\n", result.wall_seconds);
        if (!result.ok) {
            std::printf("validation FAILED\n");
            return kExitValidation;
        }
        return 0;
    } catch (const qd::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const qd::DomainError& e) {
        std::fprintf(stderr, "bad arguments: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
}
