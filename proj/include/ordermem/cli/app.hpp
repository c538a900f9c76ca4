#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordermem::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kInternalError = 3 };

/// A module or I/O failure attributed to one pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Runs one subcommand. `args` excludes the program name. Tables go to the
/// `--out` file when given, else to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordermem::cli
