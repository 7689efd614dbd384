#pragma once

#include "fsifem/config.hpp"

namespace fsifem {

struct ExecOutcome {
    bool pass = true;
    std::string summary_path;
};

// Runs the configured mode and writes its artifacts under cfg.out_dir.  The
// process exit status should be 0 iff `pass`.
ExecOutcome execute(const RunConfig& cfg, int jobs = 1);

} // namespace fsifem
