#ifndef FMR_CLI_HPP
#define FMR_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fmr/sweep.hpp"

namespace fmr
{

struct CliOptions {
    SweepSpec spec;
    std::filesystem::path out;  // empty: CSV to stdout
    std::filesystem::path plot; // empty: no SVG
};

// Raised by parse_args. exit_code() is 0 for --help, 1 for anything malformed;
// what() holds the text to show (help or error plus usage).
class UsageError : public std::runtime_error
{
public:
    UsageError(const std::string &text, int code) : std::runtime_error(text), code_(code) {}
    [[nodiscard]] int exit_code() const noexcept { return code_; }

private:
    int code_;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_runtime = 2;

// Flags override values read through --config; --ku/--k4 (and the other
// material flags) override --preset.
CliOptions parse_args(int argc, const char *const *argv);

// Whole program: parse, sweep, write outputs. Returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace fmr

#endif
