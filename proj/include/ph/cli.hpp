#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace ph {

// Everything one tool invocation needs, collected before any work starts.
// The command strings mirror the subcommand names of the binary.
struct RunConfig {
    std::string input_path;
    std::string kind = "auto";    // points | distances | complex | auto
    std::string format = "json";  // json | csv, barcode output only
    std::string output_path;      // empty writes to stdout
    std::string basis_path;       // set by --dump-basis
    std::uint32_t field = 2;
    int max_dim = 1;
    double max_scale = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    bool no_reduce = false;
    bool reduced = false;
    bool keep_zero = false;
    bool oracle_check = false;
};

// Subcommand bodies. Each returns a process exit code and reports problems
// by throwing input_error or invariant_error; run_cli translates those.
int cmd_barcode(const RunConfig& cfg);
int cmd_lu(const RunConfig& cfg);
int cmd_morse(const RunConfig& cfg);
int cmd_jordan(const RunConfig& cfg);

// Parses argv and dispatches. Exit codes: 0 success, 1 usage error,
// 2 rejected input, 3 internal invariant violation, 4 oracle mismatch.
int run_cli(int argc, const char* const* argv);

}  // namespace ph
