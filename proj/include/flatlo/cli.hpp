// Subcommand implementations behind the `flatlo` executable.
//
// Exit codes: 0 success, 1 validation error, 2 runtime/integration error.
// Failures print a JSON error document on stderr (and into the output
// directory as error.json when it is writable).
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace flatlo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct Options {
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    std::optional<double> threshold_m;
    bool reference_only = false;
    unsigned threads = 0;
};

int generate(const Options& opts, std::ostream& log);
int simulate(const Options& opts, std::ostream& log);
int plotdata(const std::filesystem::path& run_dir, std::ostream& log);

struct VerifyOptions {
    std::size_t draws = 20;
    std::uint64_t seed = 2013;
    std::size_t n_min = 2;
    std::size_t n_max = 9;
};

/// Spacing-theorem sweep: prints one table row per N and returns 0 when all pass.
int verify(const VerifyOptions& opts, std::ostream& out);

} // namespace flatlo::cli
