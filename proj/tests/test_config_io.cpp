// Config parsing strictness, defaulting, mode-hint resolution; file formats;
// end-to-end determinism of the runner's artifacts.

#include "fsifem/config.hpp"

#include "fsifem/io.hpp"
#include "fsifem/runner.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

using namespace fsifem;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// expects parse failure whose message names the offending field
void rejects(const std::string& text, const std::string& field, const std::string& hint = "") {
    try {
        parse_config_text(text, hint);
        FAIL("config accepted: ", text);
    } catch (const std::invalid_argument& e) {
        INFO("message: ", e.what());
        CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
}

} // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const RunConfig cfg = parse_config_text(R"({"case": "heat_wave", "mode": "run"})");
    CHECK(cfg.case_name == "heat_wave");
    CHECK(cfg.element == "p1");  // per-case default
    CHECK(cfg.mode == Mode::Run);
    CHECK(cfg.T == 0.25);
    CHECK(cfg.tau == 1e-3);
    CHECK(cfg.gamma == 0.01);
    CHECK(cfg.tolerance == 0.25);
    CHECK(cfg.h == 0.1);
    CHECK(!cfg.h_given);
    CHECK(!cfg.nx_given);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.seed == 12345);
    CHECK(cfg.n_samples == 200);

    const RunConfig s = parse_config_text(R"({"case": "channel_periodic", "mode": "run"})");
    CHECK(s.element == "mini");
}

TEST_CASE("strict field validation") {
    rejects(R"({"mode": "run"})", "case");
    rejects(R"({"case": "poiseuille", "mode": "run"})", "case");
    rejects(R"({"case": "heat_wave", "mode": "warp"})", "mode");
    rejects(R"({"case": "heat_wave", "mode": "run", "frobnicate": 1})", "frobnicate");
    rejects(R"({"case": "heat_wave", "mode": "run", "T": "soon"})", "T");
    // keys from other modes are rejected by name
    rejects(R"({"case": "heat_wave", "mode": "run", "tau_list": [0.1, 0.05]})", "tau_list");
    rejects(R"({"case": "heat_wave", "mode": "run", "h_list": [0.1]})", "h_list");
    rejects(R"({"case": "heat_wave", "mode": "convergence_space", "h_list": [0.1, 0.05], "nx": 4})",
            "nx");
    // element/case compatibility
    rejects(R"({"case": "heat_wave", "mode": "run", "element": "mini"})", "element");
    rejects(R"({"case": "channel_periodic", "mode": "run", "element": "p2"})", "element");
    // mesh resolution: nx needs ny, and nx excludes h
    rejects(R"({"case": "heat_wave", "mode": "run", "nx": 8})", "ny");
    rejects(R"({"case": "heat_wave", "mode": "run", "nx": 8, "ny": [6, 2], "h": 0.1})", "h");
    // geometry knobs are case-bound
    rejects(R"({"case": "heat_wave", "mode": "run", "length": 2})", "length");
    rejects(R"({"case": "heat_wave", "mode": "run", "y_levels": [0, 0.2, 0.8, 1]})", "y_levels");
    rejects(R"({"case": "channel_periodic", "mode": "run", "length": -2})", "length");
    // non-integer length passes parsing but cannot build the periodic case
    CHECK_THROWS_AS(
        make_case(parse_config_text(R"({"case": "channel_periodic", "mode": "run", "length": 1.5})")),
        std::invalid_argument);
    // self-convergence needs its reference mesh size
    rejects(R"({"case": "channel_traction", "mode": "self_convergence", "h_list": [0.1, 0.05]})",
            "h_ref");
    // sweeps with an exact-solution requirement
    rejects(R"({"case": "channel_traction", "mode": "convergence_space", "h_list": [0.1, 0.05]})",
            "case");
    rejects(R"({"case": "heat_wave", "mode": "ritz", "h_list": [0.1, 0.05]})", "case");
    // json syntax errors surface as invalid_argument too
    CHECK_THROWS_AS(parse_config_text("{"), std::invalid_argument);
}

TEST_CASE("mode hints from subcommands") {
    // hint fills in a missing mode
    const RunConfig r = parse_config_text(R"({"case": "heat_wave"})", "run");
    CHECK(r.mode == Mode::Run);
    // "convergence" resolves through the sweep list present
    const RunConfig cs =
        parse_config_text(R"({"case": "heat_wave", "h_list": [0.1, 0.05]})", "convergence");
    CHECK(cs.mode == Mode::ConvergenceSpace);
    const RunConfig ct =
        parse_config_text(R"({"case": "heat_wave", "tau_list": [0.1, 0.05]})", "convergence");
    CHECK(ct.mode == Mode::ConvergenceTime);
    // explicit mode must agree with the hint
    rejects(R"({"case": "heat_wave", "mode": "run"})", "mode", "ritz");
    // a convergence hint with no list to resolve it
    rejects(R"({"case": "heat_wave"})", "h_list", "convergence");
}

TEST_CASE("make_case and make_element resolve the experiment") {
    RunConfig cfg = parse_config_text(
        R"({"case": "channel_periodic", "mode": "run", "length": 2, "gamma": 0.02})");
    const CaseDef c = make_case(cfg);
    CHECK(c.kind == ProblemKind::StokesWave);
    CHECK(c.geom.x1 == 2.0);
    const ElementChoice e = make_element(cfg);
    CHECK(e.velocity == ElementType::P1B);

    const RunConfig tr = parse_config_text(
        R"({"case": "channel_traction", "mode": "run", "y_levels": [0, 0.2, 0.8, 1]})");
    const CaseDef ct = make_case(tr);
    CHECK(ct.geom.y_levels[1] == 0.2);
    CHECK_THROWS_AS(
        make_case(parse_config_text(
            R"({"case": "channel_traction", "mode": "run", "y_levels": [0, 0.9, 0.1, 1]})")),
        std::invalid_argument);
}

TEST_CASE("number formatting and plot files") {
    CHECK(format_num(0.25) == "0.25");
    CHECK(format_num(1e-3) == "0.001");
    CHECK(format_num(1.0 / 3.0) == "0.333333333333");
    CHECK(format_num(std::numeric_limits<double>::quiet_NaN()) == "nan");

    const std::string plot = plot_data({0.1, 0.05, 0.025}, {1e-2, 0.0, 1e-4});
    // the zero-error row is dropped; two columns of log10
    std::istringstream ss(plot);
    std::string line;
    int rows = 0;
    while (std::getline(ss, line)) {
        ++rows;
        double a, b;
        CHECK(std::sscanf(line.c_str(), "%lf %lf", &a, &b) == 2);
    }
    CHECK(rows == 2);
    CHECK(plot.find(format_num(std::log10(0.1))) != std::string::npos);
    CHECK(plot.find(format_num(std::log10(1e-4))) != std::string::npos);
}

TEST_CASE("csv layouts") {
    std::vector<StepRecord> recs(2);
    recs[0] = {0, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 1.25, 1e-15};
    recs[1] = {1, 0.5, std::numeric_limits<double>::quiet_NaN(), 0, 0, 0, 0, 1.0, 2e-15};
    const std::string csv = steps_csv(recs);
    CHECK(csv.find("step,t,err_u_L2,err_u_H1,err_eta_L2,err_eta_H1,err_w_L2,energy,"
                   "solver_residual\n") == 0);
    CHECK(csv.find("\n1,0.5,nan,") != std::string::npos);

    ConvergenceReport rep;
    rep.case_name = "heat_wave";
    rep.element_name = "p1";
    SweepRow row;
    row.h = 0.1;
    row.tau = 0.01;
    for (int i = 0; i < 5; ++i) row.err[i] = (i + 1) * 1e-3;
    rep.rows.push_back(row);
    const std::string ccsv = convergence_csv(rep);
    CHECK(ccsv ==
          "case,element,h,tau,err_u_L2,err_u_H1,err_eta_L2,err_eta_H1,err_w_L2\n"
          "heat_wave,p1,0.1,0.01,0.001,0.002,0.003,0.004,0.005\n");

    RitzReport rrep;
    RitzRow rrow;
    rrow.h = 0.125;
    for (int i = 0; i < 4; ++i) rrow.sup[i] = (i + 1) * 1e-2;
    rrep.rows.push_back(rrow);
    CHECK(ritz_csv(rrep) ==
          "h,sup_err_u_L2,sup_err_u_H1,sup_err_eta_L2,sup_err_eta_H1\n"
          "0.125,0.01,0.02,0.03,0.04\n");
}

TEST_CASE("summary and verify json shapes") {
    const std::string s = summary_json("heat_wave", "p1", {{"err_u_L2", 2.01}}, true);
    CHECK(s.find("\"case\": \"heat_wave\"") != std::string::npos);
    CHECK(s.find("\"element\": \"p1\"") != std::string::npos);
    CHECK(s.find("\"err_u_L2\": 2.01") != std::string::npos);
    CHECK(s.find("\"pass\": true") != std::string::npos);
    CHECK(s.back() == '\n');

    VerifyReport rep;
    rep.lines.push_back({"continuity", 1e-9});
    rep.max_residual = 1e-9;
    rep.n_checks = 42;
    rep.pass = true;
    const std::string v = verify_json("heat_wave", rep);
    CHECK(v.find("\"check\": \"continuity\"") != std::string::npos);
    CHECK(v.find("\"n_checks\": 42") != std::string::npos);
    CHECK(v.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("atomic writes leave no temp files behind") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "fsifem_io_test";
    std::filesystem::create_directories(dir);
    const std::filesystem::path target = dir / "data.txt";
    write_text_atomic(target.string(), "payload\n");
    CHECK(slurp(target) == "payload\n");
    write_text_atomic(target.string(), "second\n");  // overwrite through rename
    CHECK(slurp(target) == "second\n");
    int entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("runner artifacts are byte-identical across reruns") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "fsifem_runner_test";
    std::filesystem::remove_all(dir);

    RunConfig cfg = parse_config_text(R"({
        "case": "heat_wave", "mode": "convergence_space",
        "h_list": [0.25, 0.125], "tau": 0.01, "T": 0.05, "tolerance": 1.0
    })");
    cfg.out_dir = (dir / "a").string();
    const ExecOutcome first = execute(cfg, 2);
    cfg.out_dir = (dir / "b").string();
    const ExecOutcome second = execute(cfg, 1);  // different parallelism, same bytes

    CHECK(first.pass == second.pass);
    CHECK(slurp(dir / "a" / "convergence.csv") == slurp(dir / "b" / "convergence.csv"));
    CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
    CHECK(slurp(dir / "a" / "plot_err_u_L2.dat") == slurp(dir / "b" / "plot_err_u_L2.dat"));
    CHECK(slurp(first.summary_path).find("\"case\": \"heat_wave\"") != std::string::npos);

    // run mode writes the per-step table
    RunConfig rc = parse_config_text(
        R"({"case": "heat_wave", "mode": "run", "T": 0.02, "tau": 0.01, "h": 0.25})");
    rc.out_dir = (dir / "r").string();
    const ExecOutcome run = execute(rc, 1);
    CHECK(run.pass);
    const std::string steps = slurp(dir / "r" / "steps.csv");
    CHECK(steps.find("step,t,") == 0);
    CHECK(std::count(steps.begin(), steps.end(), '\n') == 4);  // header + records 0..2

    // verify-sources mode writes its report
    RunConfig vc = parse_config_text(
        R"({"case": "heat_wave", "mode": "verify_sources", "n_samples": 40})");
    vc.out_dir = (dir / "v").string();
    const ExecOutcome ver = execute(vc, 1);
    CHECK(ver.pass);
    CHECK(slurp(dir / "v" / "verify.json").find("\"pass\": true") != std::string::npos);

    std::filesystem::remove_all(dir);
}
