#include "morawetz/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace morawetz;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string thrown_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config text parsing") {
    ConfigMap cfg = parse_config_text(
        "# a comment\n"
        "name = demo\n"
        "grid.n = 32   # trailing comment\n"
        "\n"
        "grid.n = 64\n");
    CHECK(cfg.at("name") == "demo");
    CHECK(cfg.at("grid.n") == "64");  // later assignment wins
    CHECK(cfg.size() == 2);

    CHECK_THROWS(parse_config_text("not a key value line\n"));
    CHECK_THROWS(parse_config_text("= value\n"));
    CHECK_THROWS(parse_config_file("/nonexistent/config.cfg"));
}

TEST_CASE("override application") {
    ConfigMap cfg = parse_config_text("time.dt = 1e-3\n");
    apply_overrides(cfg, {"time.dt=2e-3", "grid.n=32"});
    CHECK(cfg.at("time.dt") == "2e-3");
    CHECK(cfg.at("grid.n") == "32");
    CHECK_THROWS(apply_overrides(cfg, {"missing-equals"}));
}

TEST_CASE("scenario construction and validation errors name the offender") {
    ConfigMap cfg = parse_config_text(
        "dim = 2\n"
        "grid.n = 32\n"
        "checks = conservation\n");
    Scenario s = scenario_from_config(cfg);
    CHECK(s.dim == 2);
    CHECK(s.n_points == 32);
    CHECK(s.checks == std::vector<std::string>{"conservation"});

    cfg["bogus.key"] = "1";
    std::string msg = thrown_message([&] { scenario_from_config(cfg); });
    CHECK(msg.find("bogus.key") != std::string::npos);
    cfg.erase("bogus.key");

    cfg["time.dt"] = "fast";
    msg = thrown_message([&] { scenario_from_config(cfg); });
    CHECK(msg.find("time.dt") != std::string::npos);
    cfg["time.dt"] = "1e-3";

    // A 2D-only check on a 3D scenario is rejected with the check named.
    cfg["dim"] = "3";
    cfg["checks"] = "theorem1-ratio";
    msg = thrown_message([&] { scenario_from_config(cfg); });
    CHECK(msg.find("theorem1-ratio") != std::string::npos);

    // Interaction checks on large low-dimensional grids exceed the budget.
    cfg["dim"] = "2";
    cfg["grid.n"] = "128";
    cfg["checks"] = "monotonicity";
    msg = thrown_message([&] { scenario_from_config(cfg); });
    CHECK(msg.find("budget") != std::string::npos);

    cfg["grid.n"] = "32";
    cfg["checks"] = "no-such-check";
    msg = thrown_message([&] { scenario_from_config(cfg); });
    CHECK(msg.find("no-such-check") != std::string::npos);
}

TEST_CASE("chirped gaussian refocuses: quartic integral peaks at the focal time") {
    // For width w and chirp b the waist occurs at t* = b / (w^{-4} + 4 b^2);
    // with w = 2, b = 1/8 that is exactly t* = 1.
    ConfigMap cfg = parse_config_text(
        "name = chirp\n"
        "dim = 1\n"
        "grid.n = 64\n"
        "grid.length = 16\n"
        "lambda = 0\n"
        "time.dt = 5e-3\n"
        "time.t_final = 2\n"
        "time.stride = 50\n"
        "init.family = gaussian\n"
        "init.width = 2\n"
        "init.chirp = 0.125\n"
        "checks = monotonicity\n"
        "out = harness_test_out/chirp\n");
    Scenario s = scenario_from_config(cfg);
    CHECK(s.chirp == 0.125);
    RunArtifacts art = run_scenario(s);
    const auto& t = art.trace.times;
    const auto& q = art.trace.channel("oct_l8");
    std::size_t peak = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > q[peak]) peak = i;
    CHECK(t[peak] == doctest::Approx(1.0).epsilon(0.05));
    // Symmetric about the focus: the packet returns to its initial width.
    CHECK(q.front() == doctest::Approx(q.back()).epsilon(1e-2));
    CHECK(q[peak] > 2.0 * q.front());
}

TEST_CASE("epsilon policy and weight kind resolution") {
    Scenario s;
    s.dim = 2;
    s.n_points = 64;
    s.box_length = 16.0;
    CHECK(s.effective_epsilon() == doctest::Approx(0.5));  // 2h default
    s.epsilon = 0.125;
    CHECK(s.effective_epsilon() == doctest::Approx(0.125));
    CHECK(s.resolved_weight_kind() == WeightKind::line_diag2d);
    s.dim = 1;
    CHECK(s.resolved_weight_kind() == WeightKind::diag1d);
    s.dim = 3;
    CHECK(s.resolved_weight_kind() == WeightKind::pair3d);
    s.weight_kind = "radial";
    CHECK(s.resolved_weight_kind() == WeightKind::radial);
    s.weight_kind = "banana";
    CHECK_THROWS(s.resolved_weight_kind());
}

TEST_CASE("zero data scenario passes its conservation checks") {
    Scenario s;
    s.name = "zero";
    s.dim = 2;
    s.n_points = 16;
    s.box_length = 8.0;
    s.dt = 1e-2;
    s.t_final = 0.05;
    s.observer_stride = 1;
    s.family = "zero";
    s.checks = {"conservation"};
    s.out_dir = "test_out/zero";
    RunArtifacts art = run_scenario(s);
    CHECK(!art.aborted);
    CHECK(!art.any_check_failed());
    CHECK(art.channel_order ==
          std::vector<std::string>{"mass", "energy", "px", "py", "hhalf_sq"});
    namespace fs = std::filesystem;
    CHECK(fs::exists("test_out/zero/trace.csv"));
    CHECK(fs::exists("test_out/zero/reports.txt"));
    CHECK(fs::exists("test_out/zero/summary.txt"));
    std::string reports = slurp("test_out/zero/reports.txt");
    CHECK(reports.find("check=mass-drift") != std::string::npos);
    CHECK(reports.find("verdict=pass") != std::string::npos);
}

TEST_CASE("trace CSV round-trips its values at full precision") {
    Scenario s;
    s.dim = 1;
    s.n_points = 32;
    s.box_length = 10.0;
    s.dt = 1e-2;
    s.t_final = 0.05;
    s.observer_stride = 5;
    s.family = "gaussian";
    s.amplitude = 1.1;
    s.checks = {"conservation"};
    s.tol_mass = 1e-10;
    s.out_dir = "test_out/csv";
    RunArtifacts art = run_scenario(s);
    std::string csv = slurp("test_out/csv/trace.csv");
    std::stringstream ss(csv);
    std::string header, row;
    REQUIRE(std::getline(ss, header));
    CHECK(header.rfind("t,", 0) == 0);
    CHECK(header.find(",mass") != std::string::npos);
    REQUIRE(std::getline(ss, row));
    // second column = mass at t=0, written with 17 significant digits
    std::stringstream rs(row);
    std::string cell;
    std::getline(rs, cell, ',');  // t
    CHECK(std::stod(cell) == 0.0);
    std::getline(rs, cell, ',');  // mass
    CHECK(std::stod(cell) == art.trace.channel("mass")[0]);
}

TEST_CASE("identical seeds give byte-identical artifacts") {
    Scenario s;
    s.dim = 2;
    s.n_points = 16;
    s.box_length = 8.0;
    s.dt = 2e-3;
    s.t_final = 0.02;
    s.observer_stride = 5;
    s.family = "random-band-limited";
    s.seed = 1234;
    s.band = 3;
    s.amplitude = 0.8;
    s.checks = {"conservation"};
    s.tol_mass = 1e-9;
    s.out_dir = "test_out/det_a";
    RunArtifacts a = run_scenario(s);
    s.out_dir = "test_out/det_b";
    RunArtifacts b = run_scenario(s);
    CHECK(slurp("test_out/det_a/trace.csv") == slurp("test_out/det_b/trace.csv"));
    CHECK(!a.any_check_failed());
    CHECK(!b.any_check_failed());
}

TEST_CASE("dt sweep reports second-order residual convergence") {
    Scenario s;
    s.dim = 2;
    s.n_points = 32;
    s.box_length = 8.0;
    s.t_final = 0.02;
    s.observer_stride = 5;
    s.family = "gaussian";
    s.amplitude = 0.9;
    s.width = 0.8;
    s.velocity = {2.0 * M_PI / 8.0, 0.0, 0.0};
    s.checks = {"residuals"};
    s.out_dir = "test_out/sweep";
    SweepResult sweep = run_sweep(s, "time.dt", {2e-3, 1e-3});
    REQUIRE(sweep.runs.size() == 2);
    CHECK(!sweep.any_check_failed());
    REQUIRE(sweep.orders.count("residual-mass") == 1);
    double order = sweep.orders.at("residual-mass")[0];
    CHECK(order > 1.5);
    CHECK(order < 2.5);
    write_sweep_artifacts(sweep, s.out_dir);
    namespace fs = std::filesystem;
    CHECK(fs::exists("test_out/sweep/sweep.csv"));
    CHECK(fs::exists("test_out/sweep/sweep.txt"));
    std::string txt = slurp("test_out/sweep/sweep.txt");
    CHECK(txt.find("residual-mass") != std::string::npos);
}

TEST_CASE("sweep records invalid runs as failures without aborting") {
    Scenario s;
    s.dim = 1;
    s.n_points = 16;
    s.box_length = 8.0;
    s.dt = 1e-2;
    s.t_final = 0.02;
    s.family = "zero";
    s.out_dir = "test_out/sweep_bad";
    SweepResult sweep = run_sweep(s, "grid.n", {16, 7});
    REQUIRE(sweep.runs.size() == 2);
    CHECK(!sweep.runs[0].any_check_failed());
    CHECK(sweep.runs[1].any_check_failed());
    CHECK(sweep.any_check_failed());
    CHECK_THROWS(run_sweep(s, "no.such.axis", {1.0}));
    CHECK_THROWS(run_sweep(s, "grid.n", {}));
}

TEST_CASE("report line format is machine readable") {
    EstimateReport r = make_inequality_report("demo", 1.0, 2.0, 3.0, 0.0);
    std::string line = format_report_line(r);
    CHECK(line.find("check=demo") != std::string::npos);
    CHECK(line.find("lhs=") != std::string::npos);
    CHECK(line.find("rhs=") != std::string::npos);
    CHECK(line.find("constant=") != std::string::npos);
    CHECK(line.find("ratio=") != std::string::npos);
    CHECK(line.find("verdict=pass") != std::string::npos);

    EstimateReport bad = make_inequality_report("demo", 3.0, 2.0, 1.0, 0.0);
    CHECK(format_report_line(bad).find("verdict=fail") != std::string::npos);
    EstimateReport inf = make_inequality_report("demo", 3.0, 2.0, 1.0, 0.0, true);
    CHECK(format_report_line(inf).find("verdict=info") != std::string::npos);
}
