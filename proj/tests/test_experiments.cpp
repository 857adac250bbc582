#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "qd/capacity.hpp"
#include "qd/errors.hpp"
#include "qd/experiments.hpp"

using namespace qd;

TEST_CASE("angle parsing") {
    CHECK(parse_angle("pi/8") == doctest::Approx(M_PI / 8.0));
    CHECK(parse_angle("3pi/8") == doctest::Approx(3.0 * M_PI / 8.0));
    CHECK(parse_angle("3*pi/8") == doctest::Approx(3.0 * M_PI / 8.0));
    CHECK(parse_angle("pi") == doctest::Approx(M_PI));
    CHECK(parse_angle("0.5pi") == doctest::Approx(M_PI / 2.0));
    CHECK(parse_angle("0.7853981633974483") == doctest::Approx(M_PI / 4.0));
    CHECK_THROWS_AS(parse_angle("eight"), DomainError);
}

TEST_CASE("spec hashing is stable and sensitive") {
    ExperimentSpec a;
    a.command = "fig1";
    a = resolve_defaults(a);
    ExperimentSpec b = a;
    CHECK(a.content_hash() == b.content_hash());
    b.seed = 2;
    CHECK(a.content_hash() != b.content_hash());
}

TEST_CASE("fig1 table equals the library call bit for bit") {
    ExperimentSpec spec;
    spec.command = "fig1";
    spec.thetas = {M_PI / 4.0};
    spec = resolve_defaults(spec);
    const ExperimentResult r = run_fig1(spec);
    REQUIRE(r.tables.size() == 1);
    const Table& t = r.tables[0];
    REQUIRE(t.rows.size() == 101);
    CHECK(t.rows[0][1] == 0.0);
    CHECK(t.rows[0][2] == 0.0);  // first grid point exactly zero
    // gt = 0.5 lives at index 10
    CHECK(t.rows[10][1] == doctest::Approx(0.5));
    CHECK(t.rows[10][2] == mutual_info_nofb(M_PI / 4.0, spec.gamma, 0.5 / spec.gamma));
    // last point within 1% of the asymptote
    CHECK(t.rows.back()[2] == doctest::Approx(t.rows.back()[3]).epsilon(0.01));
}

TEST_CASE("fig2 structure") {
    ExperimentSpec spec;
    spec.command = "fig2";
    spec.thetas = {M_PI / 8.0};
    spec = resolve_defaults(spec);
    const ExperimentResult r = run_fig2(spec);
    const Table& t = r.tables[0];
    CHECK(t.rows[0][2] == 0.0);
    CHECK(t.rows[0][3] == 0.0);
    // feedback leads somewhere on the grid
    double max_gain = -1.0;
    for (const auto& row : t.rows) max_gain = std::max(max_gain, row[3] - row[2]);
    CHECK(max_gain > 0.0);
}

TEST_CASE("byte-identical outputs across worker counts and runs") {
    ExperimentSpec spec;
    spec.command = "traj";
    spec.thetas = {M_PI / 4.0};
    spec.n_traj = 3;
    spec.t_max = 0.05;
    spec.seed = 5;
    spec = resolve_defaults(spec);

    setenv("QD_THREADS", "1", 1);
    const ExperimentResult r1 = run_traj(spec);
    setenv("QD_THREADS", "2", 1);
    const ExperimentResult r2 = run_traj(spec);
    unsetenv("QD_THREADS");

    REQUIRE(r1.tables.size() == r2.tables.size());
    for (std::size_t i = 0; i < r1.tables.size(); ++i)
        CHECK(table_csv(r1, r1.tables[i]) == table_csv(r2, r2.tables[i]));
    CHECK(result_json(r1) == result_json(r2));
}

TEST_CASE("csv carries the header block") {
    ExperimentSpec spec;
    spec.command = "fig1";
    spec.thetas = {M_PI / 2.0};
    spec = resolve_defaults(spec);
    const ExperimentResult r = run_fig1(spec);
    const std::string csv = table_csv(r, r.tables[0]);
    CHECK(csv.find("# qd 0.1.0") != std::string::npos);
    CHECK(csv.find("# spec_hash: ") != std::string::npos);
    CHECK(csv.find("# seed: 1") != std::string::npos);
    CHECK(csv.find("# columns: theta,gt,m_quad,m_opt") != std::string::npos);
    const std::string gp = plot_script(r);
    CHECK(gp.find("plot ") != std::string::npos);
}

TEST_CASE("validate catches the corrupted exponent") {
    ExperimentSpec spec;
    spec.command = "validate";
    spec.n_traj = 1500;  // keep the unit suite quick; thresholds scale with n
    spec = resolve_defaults(spec);

    const ExperimentResult good = run_validate(spec);
    CHECK(good.ok);

    ExperimentSpec corrupt = spec;
    corrupt.debug_sigma_z = true;
    const ExperimentResult bad = run_validate(corrupt);
    CHECK_FALSE(bad.ok);
    bool ks_suite_failed = false;
    for (const SuiteOutcome& s : bad.suites)
        if (!s.passed && s.name.find("closed_form_ks_nofb") != std::string::npos)
            ks_suite_failed = true;
    CHECK(ks_suite_failed);
}
