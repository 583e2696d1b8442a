// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "neimkit/commands.hpp"
#include "neimkit/errors.hpp"

namespace {

struct CliOptions {
    std::string experiment = "exp1";
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool exact_neim = false;
    bool exact_given = false;
};

neimkit::RunConfig resolve(const CliOptions& cli) {
    auto config = neimkit::RunConfig::defaults(neimkit::experiment_from_string(cli.experiment));
    if (!cli.config_path.empty()) config.apply_config_file(cli.config_path);
    config.out_dir = cli.out_dir;
    if (cli.seed_given) config.seed = cli.seed;
    if (cli.exact_given) config.exact_neim = cli.exact_neim;
    return config;
}

void add_common(CLI::App* cmd, CliOptions& cli) {
    cmd->add_option("--experiment", cli.experiment, "Benchmark problem")
        ->check(CLI::IsMember({"exp1", "exp2"}))
        ->required();
    cmd->add_option("--config", cli.config_path, "JSON config overriding the defaults")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", cli.out_dir, "Output directory");
    cmd->add_option("--seed", cli.seed, "Training seed")->each([&cli](const std::string&) {
        cli.seed_given = true;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyper-reduction toolkit: POD, DEIM, and greedy neural affine expansions"};
    app.require_subcommand(1);

    CliOptions cli;
    auto* snapshots = app.add_subcommand("snapshots", "Generate high-fidelity snapshots");
    add_common(snapshots, cli);
    auto* train = app.add_subcommand("train", "Build POD/DEIM/NEIM models from snapshots");
    add_common(train, cli);
    train->add_flag("--exact-neim", [&cli](std::int64_t) {
        cli.exact_neim = true;
        cli.exact_given = true;
    }, "Also train the exact constant-vector twin");
    auto* report = app.add_subcommand("report", "Emit error tables for trained models");
    add_common(report, cli);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = resolve(cli);
        if (snapshots->parsed()) neimkit::cmd_snapshots(config);
        if (train->parsed()) neimkit::cmd_train(config);
        if (report->parsed()) neimkit::cmd_report(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
