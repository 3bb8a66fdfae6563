#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fbl::cli {

enum ExitCode : int {
    kPass = 0,
    kCheckFailure = 1,
    kParseError = 2,
    kConfigError = 3,
};

/// Runs `fblbench <args...>` (args exclude the program name). The JSON
/// report goes to `out` (or to --out PATH), a one-line summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Removes the "timestamp" member so reports can be compared byte-for-byte.
std::string strip_timestamp(const std::string& report_json);

} // namespace fbl::cli
