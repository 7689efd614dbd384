#pragma once

#include "fsifem/analysis.hpp"

#include <string>
#include <vector>

namespace fsifem {

enum class Mode { Run, ConvergenceSpace, ConvergenceTime, Ritz, VerifySources, SelfConvergence };

Mode mode_from_string(const std::string& s);
std::string mode_to_string(Mode m);

// One validated experiment description.  Unset optional numbers are zero with
// a *_given marker where the distinction matters.
struct RunConfig {
    std::string case_name;   // channel_periodic | channel_traction | heat_wave
    std::string element;     // mini | p2p1 | p1 | p2 (defaulted per case)
    Mode mode = Mode::Run;

    double T = 0.25;
    double tau = 1e-3;
    double gamma = 0.01;
    double tolerance = 0.25;

    double length = 1.0;              // channel_periodic only
    std::vector<double> y_levels;     // channel_traction only; empty = default

    int nx = 0;
    std::vector<int> ny;
    double h = 0.1;
    bool nx_given = false, h_given = false;

    std::vector<double> h_list;
    std::vector<double> tau_list;
    double h_ref = 0.0;

    std::string out_dir = "out";
    unsigned long long seed = 12345;  // verify_sources sampling
    int n_samples = 200;
};

// Strict JSON parsing: unknown keys, unknown enum values, wrong types, and
// fields that do not belong to the requested mode are all field-level errors.
// `mode_hint` (a subcommand name; "convergence" covers both sweeps) supplies
// the mode when the file omits it and must agree when it does not.
RunConfig parse_config_text(const std::string& text, const std::string& mode_hint = "");
RunConfig parse_config(const std::string& path, const std::string& mode_hint = "");

// Builders resolving the config into the problem definition.
CaseDef make_case(const RunConfig& cfg);
ElementChoice make_element(const RunConfig& cfg);

} // namespace fsifem
