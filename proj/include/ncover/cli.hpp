#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ncover::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

struct RunConfig {
    std::string command;
    std::optional<int> N;
    std::optional<double> a;
    double nu = 1.0;
    bool nu_given = false;
    std::string grid;  // empty: per-command default
    std::uint64_t seed = 7;
    int samples = 200;
    double amplitude = 0.5;
    int tests = 50;
    double q = 1.5;
    std::string mode = "single_variable";
    std::string out;
    std::string format = "json";
    unsigned threads = 0;
    std::string table;
    std::string ladder;
    double perturb = 1.0;
    double tolerance = 1e-6;
};

/// Runs one subcommand. Returns 0 on success or pass, 1 on usage or parameter
/// errors, 2 when a verification fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncover::cli
