#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qd {

inline constexpr const char* kVersion = "qd 0.1.0";

enum class FeedbackMode { Off, On, Both };

/// Fully resolved run description. Everything that can influence the output
/// lives here; the canonical() string of the resolved spec is hashed into
/// every output header so runs are reproducible byte-for-byte.
struct ExperimentSpec {
    std::string command;
    std::vector<double> thetas;
    double gamma = 1.0;
    double dt = 1e-4;
    double t_max = 1.0;
    int n_traj = 10000;
    std::uint64_t seed = 1;
    double t_prep_min = 0.01;
    double t_prep_max = 10.0;
    int t_prep_points = 40;
    FeedbackMode feedback = FeedbackMode::Off;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json (json mirrors the csv tables)
    bool emit_plot = false;
    bool debug_sigma_z = false;  // hidden: corrupt the closed-form exponent

    std::string canonical() const;
    std::uint64_t content_hash() const;
};

/// Defaults that depend on the command (theta lists, grids, horizons).
ExperimentSpec resolve_defaults(ExperimentSpec spec);

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct SuiteOutcome {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string note;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<Table> tables;
    std::vector<std::string> notes;          // peaks, checks, diagnostics
    std::vector<SuiteOutcome> suites;        // validate only
    double wall_seconds = 0.0;               // console only, never serialized
    bool ok = true;
};

ExperimentResult run_fig1(const ExperimentSpec& spec);
ExperimentResult run_fig2(const ExperimentSpec& spec);
ExperimentResult run_fig3(const ExperimentSpec& spec);
ExperimentResult run_traj(const ExperimentSpec& spec);
ExperimentResult run_validate(const ExperimentSpec& spec);

ExperimentResult run_command(const ExperimentSpec& spec);  // dispatch on spec.command

/// Serialized forms; byte-stable for a fixed (spec, seed).
std::string table_csv(const ExperimentResult& r, const Table& t);
std::string result_json(const ExperimentResult& r);
std::string plot_script(const ExperimentResult& r);

/// Writes CSV (always), JSON (format == "json") and the gnuplot script
/// (emit_plot) under spec.out_dir. Returns the paths written.
std::vector<std::string> write_result(const ExperimentResult& r);

/// Angle parser for CLI values: accepts plain radians ("0.785"), "pi",
/// "pi/8", "3pi/8", "0.5pi".
double parse_angle(const std::string& text);

}  // namespace qd
