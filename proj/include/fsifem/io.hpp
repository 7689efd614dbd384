#pragma once

#include "fsifem/analysis.hpp"

#include <string>
#include <vector>

namespace fsifem {

// Fixed-format number rendering so that reruns produce byte-identical files.
std::string format_num(double v);

// Write-to-temp-then-rename in the target directory; partial files never
// appear under the final name.
void write_text_atomic(const std::string& path, const std::string& content);

// step,t,err_u_L2,...,err_w_L2,energy,solver_residual ; errors are "nan" for
// cases without an exact solution
std::string steps_csv(const std::vector<StepRecord>& records);

// case,element,h,tau,err_u_L2,err_u_H1,err_eta_L2,err_eta_H1,err_w_L2
std::string convergence_csv(const ConvergenceReport& rep);

// h,sup_err_u_L2,sup_err_u_H1,sup_err_eta_L2,sup_err_eta_H1
std::string ritz_csv(const RitzReport& rep);

// two columns, log10(x) and log10(err); rows without a positive error are
// dropped
std::string plot_data(const std::vector<double>& xs, const std::vector<double>& errs);

// {case, element, rates:{column: slope}, pass}
std::string summary_json(const std::string& case_name, const std::string& element_name,
                         const std::map<std::string, double>& rates, bool pass);

// oracle report: per-check residual maxima plus the verdict
std::string verify_json(const std::string& case_name, const VerifyReport& rep);

} // namespace fsifem
