#pragma once

// Command-line front end: figure tables, fits, oracle reports, fringe fits and
// the semiclassical Monte Carlo.

#include <iosfwd>
#include <string>
#include <vector>

namespace hbtamp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,  // oracle-check: an EXPECTED-PASS check failed
    kUsage = 2,
    kDegenerateFit = 3,
    kTruncation = 4,
    kNonConvergence = 5,
};

/// `args` excludes the program name. Results go to --output when given
/// (written atomically), otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

/// 15 significant digits, always with a decimal point or exponent.
std::string format_number(double x);

/// Writes `content` to `path` through a temporary file in the same directory
/// and a rename. Throws std::runtime_error when the path is not writable.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hbtamp::cli
