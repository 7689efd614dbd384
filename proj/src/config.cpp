// Strict JSON configuration parsing and resolution into case/element choices.

#include "fsifem/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace fsifem {

Mode mode_from_string(const std::string& s) {
    if (s == "run") return Mode::Run;
    if (s == "convergence_space") return Mode::ConvergenceSpace;
    if (s == "convergence_time") return Mode::ConvergenceTime;
    if (s == "ritz") return Mode::Ritz;
    if (s == "verify_sources") return Mode::VerifySources;
    if (s == "self_convergence") return Mode::SelfConvergence;
    throw std::invalid_argument("config: unknown mode '" + s + "' (field 'mode')");
}

std::string mode_to_string(Mode m) {
    switch (m) {
        case Mode::Run: return "run";
        case Mode::ConvergenceSpace: return "convergence_space";
        case Mode::ConvergenceTime: return "convergence_time";
        case Mode::Ritz: return "ritz";
        case Mode::VerifySources: return "verify_sources";
        case Mode::SelfConvergence: return "self_convergence";
    }
    throw std::logic_error("mode_to_string: bad enum value");
}

namespace {

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: field '" + key + "' " + what);
}

double get_number(const json& j, const std::string& key) {
    if (!j.at(key).is_number()) field_error(key, "must be a number");
    return j.at(key).get<double>();
}

std::string get_string(const json& j, const std::string& key) {
    if (!j.at(key).is_string()) field_error(key, "must be a string");
    return j.at(key).get<std::string>();
}

int get_int(const json& j, const std::string& key) {
    if (!j.at(key).is_number_integer()) field_error(key, "must be an integer");
    return j.at(key).get<int>();
}

std::vector<double> get_number_list(const json& j, const std::string& key) {
    if (!j.at(key).is_array()) field_error(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) field_error(key, "must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<int> get_int_list(const json& j, const std::string& key) {
    if (!j.at(key).is_array()) field_error(key, "must be an array of integers");
    std::vector<int> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number_integer()) field_error(key, "must be an array of integers");
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& mode_hint) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");

    RunConfig cfg;

    if (!j.contains("case")) throw std::invalid_argument("config: missing required field 'case'");
    cfg.case_name = get_string(j, "case");
    if (cfg.case_name != "channel_periodic" && cfg.case_name != "channel_traction" &&
        cfg.case_name != "heat_wave")
        throw std::invalid_argument("config: unknown case '" + cfg.case_name + "' (field 'case')");
    const bool heat = cfg.case_name == "heat_wave";
    const bool has_exact_case = cfg.case_name != "channel_traction";

    std::string mode_str;
    if (j.contains("mode")) mode_str = get_string(j, "mode");
    if (mode_str.empty()) {
        if (mode_hint.empty())
            throw std::invalid_argument("config: missing required field 'mode'");
        if (mode_hint == "convergence") {
            const bool hs = j.contains("h_list"), ts = j.contains("tau_list");
            if (hs == ts)
                throw std::invalid_argument(
                    "config: give exactly one of 'h_list' or 'tau_list' to select the "
                    "convergence mode");
            mode_str = hs ? "convergence_space" : "convergence_time";
        } else {
            mode_str = mode_hint;
        }
    } else if (!mode_hint.empty()) {
        const bool ok = mode_hint == "convergence" ? mode_str.rfind("convergence_", 0) == 0
                                                   : mode_str == mode_hint;
        if (!ok)
            throw std::invalid_argument("config: mode '" + mode_str +
                                        "' does not match the requested subcommand");
    }
    cfg.mode = mode_from_string(mode_str);

    std::set<std::string> allowed = {"case",      "element", "mode",   "T",        "gamma",
                                     "tolerance", "out_dir", "seed",   "length",   "y_levels"};
    switch (cfg.mode) {
        case Mode::Run: allowed.insert({"tau", "nx", "ny", "h"}); break;
        case Mode::ConvergenceSpace: allowed.insert({"h_list", "tau"}); break;
        case Mode::ConvergenceTime: allowed.insert({"tau_list", "h"}); break;
        case Mode::Ritz: allowed.insert({"h_list"}); break;
        case Mode::VerifySources: allowed.insert({"n_samples"}); break;
        case Mode::SelfConvergence: allowed.insert({"h_list", "h_ref", "tau"}); break;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: field '" + it.key() +
                                        "' is unknown or not allowed in mode '" + mode_str + "'");

    if (j.contains("element"))
        cfg.element = get_string(j, "element");
    else
        cfg.element = heat ? "p1" : "mini";
    ElementChoice ec = element_by_name(cfg.element);
    if ((ec.kind == ProblemKind::HeatWave) != heat)
        field_error("element", "'" + cfg.element + "' is not usable with case '" + cfg.case_name +
                                   "' (scalar elements go with heat_wave, mixed with the channels)");

    if (cfg.mode == Mode::VerifySources && !has_exact_case)
        field_error("case", "has no exact fields to verify in verify_sources mode");
    if (cfg.mode == Mode::Ritz && (heat || !has_exact_case))
        field_error("case", "must be an exact Stokes case in ritz mode");
    if (cfg.mode == Mode::ConvergenceSpace && !has_exact_case)
        field_error("case", "has no exact solution for convergence_space mode");

    if (j.contains("T")) {
        cfg.T = get_number(j, "T");
        if (cfg.T < 0.0) field_error("T", "must be >= 0");
    }
    if (j.contains("tau")) {
        cfg.tau = get_number(j, "tau");
        if (cfg.tau == 0.0) field_error("tau", "must be nonzero");
    }
    if (j.contains("gamma")) cfg.gamma = get_number(j, "gamma");
    if (j.contains("tolerance")) {
        cfg.tolerance = get_number(j, "tolerance");
        if (!(cfg.tolerance > 0.0)) field_error("tolerance", "must be positive");
    }
    if (j.contains("out_dir")) cfg.out_dir = get_string(j, "out_dir");
    if (j.contains("seed")) {
        const json& v = j.at("seed");
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<long long>() < 0))
            field_error("seed", "must be a nonnegative integer");
        cfg.seed = v.get<unsigned long long>();
    }
    if (j.contains("n_samples")) {
        cfg.n_samples = get_int(j, "n_samples");
        if (cfg.n_samples < 1) field_error("n_samples", "must be >= 1");
    }

    if (j.contains("length")) {
        if (cfg.case_name != "channel_periodic")
            field_error("length", "applies to channel_periodic only");
        cfg.length = get_number(j, "length");
        if (!(cfg.length > 0.0)) field_error("length", "must be positive");
    }
    if (j.contains("y_levels")) {
        if (cfg.case_name != "channel_traction")
            field_error("y_levels", "can only override the channel_traction geometry");
        cfg.y_levels = get_number_list(j, "y_levels");
    }

    if (j.contains("nx") != j.contains("ny"))
        throw std::invalid_argument("config: fields 'nx' and 'ny' must be given together");
    if (j.contains("nx")) {
        if (j.contains("h"))
            throw std::invalid_argument("config: give 'nx'/'ny' or 'h', not both");
        cfg.nx = get_int(j, "nx");
        if (cfg.nx < 1) field_error("nx", "must be >= 1");
        cfg.ny = get_int_list(j, "ny");
        for (int v : cfg.ny)
            if (v < 1) field_error("ny", "entries must be >= 1");
        cfg.nx_given = true;
    } else if (j.contains("h")) {
        cfg.h = get_number(j, "h");
        if (!(cfg.h > 0.0)) field_error("h", "must be positive");
        cfg.h_given = true;
    }

    if (j.contains("h_list")) {
        cfg.h_list = get_number_list(j, "h_list");
        if (cfg.h_list.empty()) field_error("h_list", "must be a nonempty list");
        for (double v : cfg.h_list)
            if (!(v > 0.0)) field_error("h_list", "entries must be positive");
    }
    if (j.contains("tau_list")) {
        cfg.tau_list = get_number_list(j, "tau_list");
        if (cfg.tau_list.empty()) field_error("tau_list", "must be a nonempty list");
        for (double v : cfg.tau_list)
            if (!(v > 0.0)) field_error("tau_list", "entries must be positive");
    }
    if (cfg.mode == Mode::ConvergenceSpace || cfg.mode == Mode::Ritz ||
        cfg.mode == Mode::SelfConvergence) {
        if (cfg.h_list.empty())
            throw std::invalid_argument("config: missing required field 'h_list' for mode '" +
                                        mode_str + "'");
    }
    if (cfg.mode == Mode::ConvergenceTime && cfg.tau_list.empty())
        throw std::invalid_argument("config: missing required field 'tau_list' for mode '" +
                                    mode_str + "'");
    if (cfg.mode == Mode::SelfConvergence) {
        if (!j.contains("h_ref"))
            throw std::invalid_argument("config: missing required field 'h_ref' for mode '" +
                                        mode_str + "'");
        cfg.h_ref = get_number(j, "h_ref");
        if (!(cfg.h_ref > 0.0)) field_error("h_ref", "must be positive");
    }

    return cfg;
}

RunConfig parse_config(const std::string& path, const std::string& mode_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), mode_hint);
}

CaseDef make_case(const RunConfig& cfg) {
    if (cfg.case_name == "channel_periodic") {
        const double L = cfg.length;
        if (std::abs(L - std::lround(L)) > 1e-12)
            throw std::invalid_argument(
                "config: field 'length' must be a positive integer (the exact solution has "
                "x-period 1)");
        return channel_periodic_case(cfg.gamma, L);
    }
    if (cfg.case_name == "channel_traction") {
        GeometrySpec g = traction_channel_geometry();
        if (!cfg.y_levels.empty()) {
            if (cfg.y_levels.size() != 4 || cfg.y_levels.front() != 0.0 ||
                cfg.y_levels.back() != 1.0)
                throw std::invalid_argument(
                    "config: field 'y_levels' must be [0, y1, y2, 1] for channel_traction");
            g.y_levels = cfg.y_levels;
        }
        return traction_case(g);
    }
    return heat_wave_case();
}

ElementChoice make_element(const RunConfig& cfg) { return element_by_name(cfg.element); }

} // namespace fsifem
