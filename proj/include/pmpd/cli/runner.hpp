#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmpd/cli/config.hpp"
#include "pmpd/cli/output.hpp"

namespace pmpd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runs mesh n and writes history.csv, summary.json and the requested dumps
// into dir. Numerical failures propagate (linalg::SolverError,
// fem::InfeasibleControl); file errors throw IoError.
RunSummary run_single(const RunConfig& config, std::size_t n, const std::filesystem::path& dir);

// One run per mesh in config.sweep, each in dir/n<N>/, plus sweep.csv,
// sweep_history.csv and sweep_summary.json in dir. Failed runs are recorded
// in their row and the sweep continues.
std::vector<RunSummary> run_sweep(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log);

// Full command-line entry point; returns the process exit code.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmpd::cli
