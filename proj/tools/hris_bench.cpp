// SPDX-License-Identifier: Apache-2.0
//
// hris-sim: link-level simulation and optimization for hybrid RIS assisted MIMO
// Copyright (C) 2026 The hris-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// hris-bench: command-line front end for the experiment runner.

#include "hris/bench.hpp"
#include "hris/checkpoint.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace
{

namespace bench = hris::bench;

enum Exit : int
{
    ok = 0,
    other_failure = 1,
    config_error = 2,
    numeric_failure = 3,
    missing_artifact = 4,
};

struct CommonOptions
{
    std::string config;
    std::string profile;
    std::uint64_t seed = 0;
    std::string out;
    std::string mode;
};

void add_common(CLI::App *cmd, CommonOptions &o)
{
    cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--profile", o.profile, "Built-in defaults to start from")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--seed", o.seed, "Master seed (overrides the config)");
    cmd->add_option("--out", o.out, "Output directory (overrides the config)");
}

bench::ExperimentConfig resolve(const CommonOptions &o, CLI::App *cmd, const char *experiment)
{
    bench::Overrides ov;
    if (!o.profile.empty())
        ov.profile = o.profile;
    if (cmd->count("--seed"))
        ov.seed = o.seed;
    if (!o.out.empty())
        ov.output_dir = o.out;
    if (!o.mode.empty())
        ov.mode = o.mode;
    ov.experiment = experiment;
    return bench::load_config(o.config.empty() ? std::nullopt : std::optional<std::filesystem::path>(o.config),
                              ov);
}

void log_line(const std::string &msg)
{
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    const double s = std::chrono::duration<double>(clock::now() - start).count();
    std::fprintf(stderr, "[%9.2fs] %s\n", s, msg.c_str());
}

void announce(const bench::ExperimentConfig &cfg)
{
    log_line("profile=" + cfg.profile + " seed=" + std::to_string(cfg.seed) + " config_hash=" + cfg.hash() +
             " output_dir=" + cfg.output_dir.string());
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid RIS MIMO experiment runner"};
    app.set_version_flag("--version", bench::build_version());
    app.require_subcommand(1);

    CommonOptions train_o, eval_o, sweep_o, rt_o, plot_o;
    std::string checkpoint;
    std::vector<std::string> csvs;

    auto *train = app.add_subcommand("train", "Train a PPO policy and write its reward curve and checkpoint");
    add_common(train, train_o);
    train->add_option("--mode", train_o.mode, "HRIS mode")->check(CLI::IsMember({"passive", "fixed", "dynamic"}));

    auto *evaluate = app.add_subcommand("evaluate", "Compare a trained policy with the AO and random baselines");
    add_common(evaluate, eval_o);
    evaluate->add_option("--mode", eval_o.mode, "HRIS mode")->check(CLI::IsMember({"passive", "fixed", "dynamic"}));
    evaluate->add_option("--checkpoint", checkpoint, "Checkpoint to evaluate (default: the one train writes)");

    auto *sweep = app.add_subcommand("sweep-k", "Mean SE against the number of active elements");
    add_common(sweep, sweep_o);

    auto *runtime = app.add_subcommand("bench-runtime", "DRL inference and AO solve time against N");
    add_common(runtime, rt_o);

    auto *plot = app.add_subcommand("plot", "Render result CSVs as SVG line charts");
    add_common(plot, plot_o);
    plot->add_option("csv", csvs, "Result CSV files")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::config_error;
    }

    try
    {
        if (train->parsed())
        {
            const auto cfg = resolve(train_o, train, "train");
            announce(cfg);
            const auto out = bench::cmd_train(cfg, log_line);
            std::cout << out.reward_csv.string() << '\n' << out.checkpoint.string() << '\n';
        }
        else if (evaluate->parsed())
        {
            const auto cfg = resolve(eval_o, evaluate, "evaluate");
            announce(cfg);
            const auto out = bench::cmd_evaluate(
                cfg, checkpoint.empty() ? std::nullopt : std::optional<std::filesystem::path>(checkpoint), log_line);
            std::cout << out.se_csv.string() << '\n';
        }
        else if (sweep->parsed())
        {
            const auto cfg = resolve(sweep_o, sweep, "sweep-k");
            announce(cfg);
            std::cout << bench::cmd_sweep_k(cfg, log_line).string() << '\n';
        }
        else if (runtime->parsed())
        {
            const auto cfg = resolve(rt_o, runtime, "bench-runtime");
            announce(cfg);
            std::cout << bench::cmd_bench_runtime(cfg, log_line).string() << '\n';
        }
        else if (plot->parsed())
        {
            // The config only has to be valid here; plots take their
            // provenance from the CSV comments.
            if (!plot_o.config.empty() || !plot_o.profile.empty())
                resolve(plot_o, plot, "train");
            std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
            const auto out_dir = plot_o.out.empty() ? std::nullopt : std::optional<std::filesystem::path>(plot_o.out);
            for (const auto &p : bench::cmd_plot(paths, out_dir))
                std::cout << p.string() << '\n';
        }
        return Exit::ok;
    }
    catch (const bench::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return Exit::config_error;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return Exit::config_error;
    }
    catch (const hris::NumericError &e)
    {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return Exit::numeric_failure;
    }
    catch (const hris::ppo::NonFiniteGradient &e)
    {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return Exit::numeric_failure;
    }
    catch (const bench::MissingArtifact &e)
    {
        std::cerr << "missing artifact: " << e.what() << '\n';
        return Exit::missing_artifact;
    }
    catch (const hris::ppo::CheckpointError &e)
    {
        std::cerr << "unreadable checkpoint: " << e.what() << '\n';
        return Exit::missing_artifact;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::other_failure;
    }
}
