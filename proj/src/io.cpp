// Artifact serialization: CSV tables, plot data, JSON summaries, atomic file
// writes.

#include "fsifem/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsifem {

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("io: cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("io: write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("io: cannot move '" + tmp + "' to '" + path + "'");
}

std::string steps_csv(const std::vector<StepRecord>& records) {
    std::ostringstream out;
    out << "step,t,err_u_L2,err_u_H1,err_eta_L2,err_eta_H1,err_w_L2,energy,solver_residual\n";
    for (const StepRecord& r : records)
        out << r.step << ',' << format_num(r.t) << ',' << format_num(r.err_u_l2) << ','
            << format_num(r.err_u_h1) << ',' << format_num(r.err_eta_l2) << ','
            << format_num(r.err_eta_h1) << ',' << format_num(r.err_w_l2) << ','
            << format_num(r.energy) << ',' << format_num(r.solver_residual) << '\n';
    return out.str();
}

std::string convergence_csv(const ConvergenceReport& rep) {
    std::ostringstream out;
    out << "case,element,h,tau,err_u_L2,err_u_H1,err_eta_L2,err_eta_H1,err_w_L2\n";
    for (const SweepRow& r : rep.rows) {
        out << rep.case_name << ',' << rep.element_name << ',' << format_num(r.h) << ','
            << format_num(r.tau);
        for (double e : r.err) out << ',' << format_num(e);
        out << '\n';
    }
    return out.str();
}

std::string ritz_csv(const RitzReport& rep) {
    std::ostringstream out;
    out << "h,sup_err_u_L2,sup_err_u_H1,sup_err_eta_L2,sup_err_eta_H1\n";
    for (const RitzRow& r : rep.rows) {
        out << format_num(r.h);
        for (double e : r.sup) out << ',' << format_num(e);
        out << '\n';
    }
    return out.str();
}

std::string plot_data(const std::vector<double>& xs, const std::vector<double>& errs) {
    if (xs.size() != errs.size()) throw std::invalid_argument("plot_data: length mismatch");
    std::ostringstream out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(errs[i] > 0.0) || !std::isfinite(errs[i])) continue;
        out << format_num(std::log10(xs[i])) << ' ' << format_num(std::log10(errs[i])) << '\n';
    }
    return out.str();
}

std::string summary_json(const std::string& case_name, const std::string& element_name,
                         const std::map<std::string, double>& rates, bool pass) {
    nlohmann::json j;
    j["case"] = case_name;
    j["element"] = element_name;
    j["rates"] = nlohmann::json::object();
    for (const auto& [col, slope] : rates) j["rates"][col] = slope;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

std::string verify_json(const std::string& case_name, const VerifyReport& rep) {
    nlohmann::json j;
    j["case"] = case_name;
    j["checks"] = nlohmann::json::array();
    for (const auto& line : rep.lines)
        j["checks"].push_back({{"check", line.check}, {"max_residual", line.max_residual}});
    j["max_residual"] = rep.max_residual;
    j["n_checks"] = rep.n_checks;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

} // namespace fsifem
