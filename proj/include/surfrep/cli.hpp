#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace surfrep {
namespace cli {

// Runs one command line (argv without the program name). The JSON report
// goes to `out`, diagnostics to `err`. Exit codes: 0 all verdicts pass
// (none-found counts with --allow-none), 1 a verdict failed or a search came
// back empty, 2 usage or input errors. Reports are byte-identical across
// reruns with the same arguments except for the timing_ms field.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

extern const char* kToolVersion;
extern const int kSchemaVersion;

}  // namespace cli
}  // namespace surfrep
