// Mode orchestration: resolve the config, run the experiment, write CSV/JSON
// and plot data, report the gate outcome.

#include "fsifem/runner.hpp"

#include "fsifem/io.hpp"
#include "fsifem/log.hpp"

#include <filesystem>

namespace fsifem {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::vector<std::pair<std::string, std::vector<double>>> report_columns(
    const ConvergenceReport& rep) {
    std::vector<std::pair<std::string, std::vector<double>>> cols;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> v;
        v.reserve(rep.rows.size());
        for (const SweepRow& r : rep.rows) v.push_back(r.err[i]);
        cols.emplace_back(kErrorColumns[i], std::move(v));
    }
    return cols;
}

void write_plots(const std::string& dir, const std::vector<double>& xs,
                 const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
    for (const auto& [name, errs] : columns)
        write_text_atomic(join(dir, "plot_" + name + ".dat"), plot_data(xs, errs));
}

template <typename Report>
void log_rates(const Report& rep) {
    for (const auto& [col, slope] : rep.rates) {
        std::string adj;
        for (double a : rep.adjacent.at(col)) adj += ' ' + format_num(a);
        logging::info("rate " + col + ": slope " + format_num(slope) + ", adjacent" + adj);
    }
    for (const std::string& col : rep.converged_columns)
        logging::info("rate " + col + ": converged to zero");
    for (const auto& [col, ok] : rep.gates)
        logging::info("gate " + col + ": " + (ok ? "pass" : "FAIL"));
}

ExecOutcome finish_convergence(const RunConfig& cfg, const ConvergenceReport& rep,
                               const std::string& csv_name, bool xs_are_tau) {
    write_text_atomic(join(cfg.out_dir, csv_name), convergence_csv(rep));
    std::vector<double> xs;
    for (const SweepRow& r : rep.rows) xs.push_back(xs_are_tau ? r.tau : r.h);
    write_plots(cfg.out_dir, xs, report_columns(rep));
    ExecOutcome out;
    out.summary_path = join(cfg.out_dir, "summary.json");
    write_text_atomic(out.summary_path,
                      summary_json(rep.case_name, rep.element_name, rep.rates, rep.pass));
    out.pass = rep.pass;
    log_rates(rep);
    return out;
}

} // namespace

ExecOutcome execute(const RunConfig& cfg, int jobs) {
    fs::create_directories(cfg.out_dir);
    CaseDef c = make_case(cfg);
    ElementChoice elem = make_element(cfg);
    logging::info("mode " + mode_to_string(cfg.mode) + ", case " + c.name + ", element " +
                  elem.name);

    switch (cfg.mode) {
        case Mode::Run: {
            Mesh mesh = cfg.nx_given ? build_structured_mesh(c.geom, cfg.nx, cfg.ny)
                                     : build_structured_mesh(c.geom, cfg.h);
            DofLayout layout = build_layout(mesh, elem.kind, elem.velocity);
            const int nsteps = steps_for(cfg.T, cfg.tau);
            const double tau_act = nsteps > 0 ? cfg.T / nsteps : cfg.tau;
            logging::info("mesh h = " + format_num(mesh.h()) + ", " +
                          format_num(double(nsteps)) + " steps of tau = " + format_num(tau_act));
            RunResult rr = run_case(layout, c, tau_act, nsteps);
            write_text_atomic(join(cfg.out_dir, "steps.csv"), steps_csv(rr.records));
            ExecOutcome out;
            out.summary_path = join(cfg.out_dir, "summary.json");
            write_text_atomic(out.summary_path, summary_json(c.name, elem.name, {}, true));
            return out;
        }
        case Mode::ConvergenceSpace: {
            ConvergenceReport rep =
                convergence_space(c, elem, cfg.h_list, cfg.tau, cfg.T, cfg.tolerance, jobs);
            return finish_convergence(cfg, rep, "convergence.csv", false);
        }
        case Mode::ConvergenceTime: {
            ConvergenceReport rep =
                convergence_time(c, elem, cfg.h, cfg.tau_list, cfg.T, cfg.tolerance, jobs);
            return finish_convergence(cfg, rep, "convergence.csv", true);
        }
        case Mode::Ritz: {
            RitzReport rep = ritz_sweep(c, elem, cfg.h_list, cfg.T, cfg.tolerance, jobs);
            write_text_atomic(join(cfg.out_dir, "ritz.csv"), ritz_csv(rep));
            std::vector<std::pair<std::string, std::vector<double>>> cols;
            for (int i = 0; i < 4; ++i) {
                std::vector<double> v;
                for (const RitzRow& r : rep.rows) v.push_back(r.sup[i]);
                cols.emplace_back(kRitzColumns[i], std::move(v));
            }
            std::vector<double> xs;
            for (const RitzRow& r : rep.rows) xs.push_back(r.h);
            write_plots(cfg.out_dir, xs, cols);
            ExecOutcome out;
            out.summary_path = join(cfg.out_dir, "summary.json");
            write_text_atomic(out.summary_path,
                              summary_json(rep.case_name, rep.element_name, rep.rates, rep.pass));
            out.pass = rep.pass;
            log_rates(rep);
            return out;
        }
        case Mode::VerifySources: {
            VerifyReport rep = verify_sources(c, cfg.n_samples, static_cast<unsigned>(cfg.seed));
            for (const auto& line : rep.lines)
                logging::info("verify " + line.check + ": max residual " +
                              format_num(line.max_residual));
            ExecOutcome out;
            out.summary_path = join(cfg.out_dir, "verify.json");
            write_text_atomic(out.summary_path, verify_json(c.name, rep));
            out.pass = rep.pass;
            return out;
        }
        case Mode::SelfConvergence: {
            ConvergenceReport rep = self_convergence(c, elem, cfg.h_list, cfg.h_ref, cfg.tau,
                                                     cfg.T, cfg.tolerance, jobs);
            return finish_convergence(cfg, rep, "self_convergence.csv", false);
        }
    }
    throw std::logic_error("execute: bad mode enum");
}

} // namespace fsifem
