// flatlo: squadron transition reference generator and simulator.
#include "flatlo/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <spdlog/spdlog.h>

int main(int argc, char** argv) {
    // FLATLO_LOG_LEVEL: trace, debug, info, warn (default), error, critical, off
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("FLATLO_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }

    CLI::App app{"Latitudinal-to-longitudinal squadron transition: reference generation and simulation"};
    app.require_subcommand(1);

    flatlo::cli::Options opts;
    std::uint64_t seed = 0;
    double threshold = 0.0;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", opts.out, "output directory")->required();
        cmd->add_option("--seed", seed, "override the noise seed");
        cmd->add_option("--threshold-m", threshold, "collision threshold [m]");
        cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware count)");
    };

    auto* generate = app.add_subcommand("generate", "write reference trajectories and formation quality");
    add_run_flags(generate);

    auto* simulate = app.add_subcommand("simulate", "closed-loop simulation with separation analysis");
    add_run_flags(simulate);
    simulate->add_flag("--reference-only", opts.reference_only, "skip dynamics, analyse references only");

    std::filesystem::path run_dir;
    auto* plot = app.add_subcommand("plotdata", "emit gnuplot-ready data blocks for a completed run");
    plot->add_option("run_dir", run_dir, "run output directory")->required();

    flatlo::cli::VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "spacing-theorem sweep over N = 2..9");
    verify->add_option("--draws", verify_opts.draws, "random configurations per N");
    verify->add_option("--seed", verify_opts.seed, "sweep seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : flatlo::cli::kExitValidation;
    }

    for (auto* cmd : {generate, simulate}) {
        if (cmd->parsed()) {
            if (cmd->count("--seed") > 0) {
                opts.seed = seed;
            }
            if (cmd->count("--threshold-m") > 0) {
                opts.threshold_m = threshold;
            }
        }
    }

    if (generate->parsed()) {
        return flatlo::cli::generate(opts, std::cout);
    }
    if (simulate->parsed()) {
        return flatlo::cli::simulate(opts, std::cout);
    }
    if (plot->parsed()) {
        return flatlo::cli::plotdata(run_dir, std::cout);
    }
    return flatlo::cli::verify(verify_opts, std::cout);
}
