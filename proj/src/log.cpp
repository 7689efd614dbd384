// Leveled stderr logging controlled by FSI_FEM_LOG.

#include "fsifem/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace fsifem::logging {

namespace {

Level parse_level(const char* s) {
    if (!s || !*s) return Level::Warn;
    const std::string v(s);
    if (v == "quiet" || v == "0") return Level::Quiet;
    if (v == "error" || v == "1") return Level::Error;
    if (v == "warn" || v == "2") return Level::Warn;
    if (v == "info" || v == "3") return Level::Info;
    if (v == "debug" || v == "4") return Level::Debug;
    return Level::Warn;
}

const char* tag(Level l) {
    switch (l) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
        default: return "";
    }
}

std::mutex out_mutex;

} // namespace

Level level() {
    static const Level lv = parse_level(std::getenv("FSI_FEM_LOG"));
    return lv;
}

bool enabled(Level l) { return l != Level::Quiet && static_cast<int>(l) <= static_cast<int>(level()); }

void log(Level l, const std::string& msg) {
    if (!enabled(l)) return;
    std::lock_guard<std::mutex> lk(out_mutex);
    std::cerr << "[fsifem:" << tag(l) << "] " << msg << '\n';
}

void error(const std::string& msg) { log(Level::Error, msg); }
void warn(const std::string& msg) { log(Level::Warn, msg); }
void info(const std::string& msg) { log(Level::Info, msg); }
void debug(const std::string& msg) { log(Level::Debug, msg); }

} // namespace fsifem::logging
