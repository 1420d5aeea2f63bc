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


#pragma once

#include "hris/baselines.hpp"
#include "hris/env.hpp"
#include "hris/ppo.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hris::bench
{

// Bad configuration or malformed input file. Maps to exit code 2.
struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// A required input artifact (checkpoint, CSV) is absent. Maps to exit code 4.
struct MissingArtifact : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string build_version();

// ---- Configuration ------------------------------------------------------

enum class Experiment
{
    train,
    evaluate,
    sweep_k,
    bench_runtime,
};

std::string_view to_string(Experiment e);

struct SweepSettings
{
    std::vector<std::size_t> k_values;
    std::vector<Mode> modes;
    bool train_missing = true; // train absent checkpoints instead of failing
};

struct RuntimeSettings
{
    std::vector<std::size_t> n_values;
    std::size_t trials = 100;
    std::size_t warmup = 5;
};

struct ExperimentConfig
{
    std::string profile;
    Experiment experiment = Experiment::train;
    Mode mode = Mode::dynamic;
    std::uint64_t seed = 1;
    std::uint64_t eval_seed = 0; // held-out channel set, shared across training seeds
    std::size_t episodes = 0;
    std::size_t steps_per_episode = 0;
    std::size_t eval_channels = 0;
    std::size_t workers = 0; // evaluation threads, 0 = hardware concurrency
    std::filesystem::path output_dir;

    SystemConfig system;
    GeometryParams geometry;
    std::optional<std::vector<std::size_t>> fixed_active_set;
    ppo::PpoHyper ppo;
    ao::AoSettings ao;
    SweepSettings sweep;
    RuntimeSettings runtime;

    // Effective configuration in file units (dB, dBm), canonical key order.
    nlohmann::json effective;

    // FNV-1a 64 of the effective config without output_dir and workers, as
    // 16 hex digits.
    std::string hash() const;

    // Environment for a mode, optionally overriding N and K.
    EnvSpec env(Mode m, std::optional<std::size_t> n_ris = std::nullopt,
                std::optional<std::size_t> k_active = std::nullopt) const;
};

// Built-in defaults for "desk" or "paper", in file units.
nlohmann::json profile_defaults(const std::string &profile);

struct Overrides
{
    std::optional<std::string> profile;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::string> experiment; // "train", "sweep-k", ...
    std::optional<std::string> mode;       // "passive", "fixed", "dynamic"
};

// Profile defaults, then the user document (unknown keys rejected), then
// command-line overrides. Everything is validated before returning.
ExperimentConfig make_config(const nlohmann::json &user, const Overrides &ov = {});
ExperimentConfig load_config(const std::optional<std::filesystem::path> &path, const Overrides &ov = {});

std::uint64_t fnv1a64(std::string_view bytes);

// ---- Evaluation ---------------------------------------------------------

// Held-out channels for evaluation, independent of any training seed.
std::vector<ChannelSet> eval_channel_set(const EnvSpec &env, std::uint64_t eval_seed, std::size_t count);

struct SeSummary
{
    std::vector<double> per_channel;
    double mean = 0.0;
    double std = 0.0; // sample standard deviation
};

SeSummary summarize(std::vector<double> values);

// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn);

// Deterministic (mean) policy on every channel.
SeSummary evaluate_drl(const ppo::Actor &actor, const EnvSpec &env, const std::vector<ChannelSet> &channels,
                       std::size_t workers = 0);
SeSummary evaluate_ao(const EnvSpec &env, const std::vector<ChannelSet> &channels, const ao::AoSettings &s,
                      std::uint64_t eval_seed, std::size_t workers = 0);
SeSummary evaluate_random(const EnvSpec &env, const std::vector<ChannelSet> &channels, std::uint64_t eval_seed,
                          std::size_t workers = 0);

// ---- Artifacts ----------------------------------------------------------

// Provenance lines written as "# key=value" comments at the top of every CSV.
std::vector<std::string> provenance(const ExperimentConfig &cfg, const std::string &what);

void write_csv(const std::filesystem::path &path, const std::vector<std::string> &comments,
               const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows);

std::string fmt_double(double x);

inline const std::vector<std::string> reward_header{"episode", "mean_se_bpshz", "mean_scaled_reward",
                                                    "clip_fraction", "kl_estimate"};
inline const std::vector<std::string> se_header{"mode",         "n_ris",        "k_active",
                                                "mean_se_bpshz", "std_se_bpshz", "n_channels"};
inline const std::vector<std::string> runtime_header{"method", "n_ris",  "median_ms", "mean_ms",
                                                     "min_ms", "max_ms", "n_trials"};
inline const std::vector<std::string> result_header{"experiment", "config_hash", "seed",  "mode", "n_ris",
                                                    "k_active",   "metric",      "value", "unit", "wall_ms"};

// Long-format record; every row carries the config hash that produced it.
struct ResultRow
{
    std::string experiment;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string mode;
    std::size_t n_ris = 0;
    std::size_t k_active = 0;
    std::string metric;
    double value = 0.0;
    std::string unit;
    double wall_ms = 0.0;
};

void write_results(const std::filesystem::path &path, const ExperimentConfig &cfg, const std::vector<ResultRow> &rows);

// Checkpoint location for a (mode, N, K, seed) combination under output_dir.
std::filesystem::path checkpoint_path(const ExperimentConfig &cfg, Mode mode, std::size_t n_ris, std::size_t k_active);

// ---- Commands -----------------------------------------------------------

using Log = std::function<void(const std::string &)>;

struct TrainOutput
{
    std::filesystem::path reward_csv;
    std::filesystem::path checkpoint;
    ppo::TrainState state;
};

// Trains cfg.mode at the configured N and K.
TrainOutput cmd_train(const ExperimentConfig &cfg, const Log &log = {});

struct EvaluateOutput
{
    std::filesystem::path se_csv;
    SeSummary drl, ao, random;
};

// Evaluates a checkpoint (default: the one cmd_train writes) against the AO
// surrogate and the random baseline on the held-out channel set.
EvaluateOutput cmd_evaluate(const ExperimentConfig &cfg, const std::optional<std::filesystem::path> &checkpoint = {},
                            const Log &log = {});

std::filesystem::path cmd_sweep_k(const ExperimentConfig &cfg, const Log &log = {});

std::filesystem::path cmd_bench_runtime(const ExperimentConfig &cfg, const Log &log = {});

// One SVG per CSV, written next to the input or into out_dir if given.
std::vector<std::filesystem::path> cmd_plot(const std::vector<std::filesystem::path> &csvs,
                                            const std::optional<std::filesystem::path> &out_dir = {});

// ---- CSV reading and plotting -------------------------------------------

struct CsvTable
{
    std::vector<std::string> comments; // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path &path);

// Renders a table with a known header as an SVG document.
std::string render_svg(const CsvTable &table, const std::string &title);

} // namespace hris::bench
