#pragma once

#include <string>

namespace fsifem::logging {

// Verbosity from the FSI_FEM_LOG environment variable: quiet|error|warn|info|
// debug or 0..4.  Messages go to stderr; data files stay clean.
enum class Level { Quiet = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

Level level();
bool enabled(Level l);
void log(Level l, const std::string& msg);

void error(const std::string& msg);
void warn(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

} // namespace fsifem::logging
