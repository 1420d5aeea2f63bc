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


#include "hris/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef HRIS_VERSION_STRING
#define HRIS_VERSION_STRING "unknown"
#endif

namespace hris::bench
{

using json = nlohmann::json;

std::string build_version() { return "hris-sim " HRIS_VERSION_STRING; }

std::string_view to_string(Experiment e)
{
    switch (e)
    {
    case Experiment::train:
        return "train";
    case Experiment::evaluate:
        return "evaluate";
    case Experiment::sweep_k:
        return "sweep-k";
    case Experiment::bench_runtime:
        return "bench-runtime";
    }
    return "unknown";
}

namespace
{

Experiment experiment_from_string(const std::string &s)
{
    for (Experiment e : {Experiment::train, Experiment::evaluate, Experiment::sweep_k, Experiment::bench_runtime})
        if (s == to_string(e))
            return e;
    throw ConfigError("experiment: unknown value '" + s + "' (expected train|evaluate|sweep-k|bench-runtime)");
}

json common_defaults()
{
    return {
        {"profile", "desk"},
        {"experiment", "train"},
        {"mode", "dynamic"},
        {"seed", 1},
        {"eval_seed", 20260},
        {"episodes", 2000},
        {"steps_per_episode", 256},
        {"eval_channels", 50},
        {"workers", 0},
        {"output_dir", "out"},
        {"system",
         {{"n_tx", 4},
          {"n_rx", 2},
          {"n_streams", 2},
          {"n_ris", 16},
          {"n_active", 2},
          {"max_bs_power_dbm", 40.0},
          {"amp_factor", 10.0},
          {"noise_psd_dbm_hz", -169.0},
          {"bandwidth_hz", 20e6},
          {"noise_figure_db", 10.0},
          {"residual_si_db", 1.0},
          {"fixed_active_set", nullptr}}},
        {"geometry",
         {{"bs_position", {0.0, 0.0}},
          {"ris_position", {50.0, 0.0}},
          {"user_position", {45.0, 2.0}},
          {"beta0_db", -30.0},
          {"d0_m", 1.0},
          {"path_loss_exponents", {3.5, 2.2, 2.0}},
          {"rician_k", {0.0, 1.0, "inf"}}}},
        {"ppo",
         {{"gamma", 0.99},
          {"lam", 0.95},
          {"clip_eps", 0.2},
          {"lr_actor", 1e-3},
          {"lr_critic", 1e-3},
          {"batch_len", 2048},
          {"minibatch_size", 256},
          {"epochs_per_update", 10},
          {"entropy_coef", 0.0},
          {"reward_scale", 10.0},
          {"hidden", {256, 256}}}},
        {"ao", {{"max_sweeps", 20}, {"se_tol", 1e-3}, {"phase_grid", 64}, {"restarts", 4}, {"refine", true}}},
        {"sweep_k", {{"k_values", {0, 1, 2, 3, 4}}, {"modes", {"passive", "fixed", "dynamic"}}, {"train_missing", true}}},
        {"bench_runtime", {{"n_values", {16, 50, 100, 150}}, {"trials", 100}, {"warmup", 5}}},
    };
}

// ---- Strict typed access ------------------------------------------------

const json &at(const json &j, const std::string &key, const std::string &path)
{
    if (!j.contains(key))
        throw ConfigError(path + key + ": missing");
    return j.at(key);
}

double get_number(const json &j, const std::string &key, const std::string &path)
{
    const json &v = at(j, key, path);
    if (!v.is_number())
        throw ConfigError(path + key + ": expected a number, got " + std::string(v.type_name()));
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(path + key + ": must be finite");
    return x;
}

std::uint64_t get_uint(const json &j, const std::string &key, const std::string &path)
{
    const json &v = at(j, key, path);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError(path + key + ": expected a non-negative integer, got " + v.dump());
    return v.get<std::uint64_t>();
}

std::size_t get_size(const json &j, const std::string &key, const std::string &path)
{
    return static_cast<std::size_t>(get_uint(j, key, path));
}

std::string get_string(const json &j, const std::string &key, const std::string &path)
{
    const json &v = at(j, key, path);
    if (!v.is_string())
        throw ConfigError(path + key + ": expected a string, got " + std::string(v.type_name()));
    return v.get<std::string>();
}

bool get_bool(const json &j, const std::string &key, const std::string &path)
{
    const json &v = at(j, key, path);
    if (!v.is_boolean())
        throw ConfigError(path + key + ": expected true or false");
    return v.get<bool>();
}

std::vector<std::size_t> get_size_list(const json &j, const std::string &key, const std::string &path)
{
    const json &v = at(j, key, path);
    if (!v.is_array())
        throw ConfigError(path + key + ": expected an array of non-negative integers");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_size(json{{"x", v[i]}}, "x", path + key + "[" + std::to_string(i) + "]."));
    return out;
}

Point2 get_point(const json &j, const std::string &key, const std::string &path)
{
    const json &v = at(j, key, path);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(path + key + ": expected [x, y] in metres");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::array<double, 3> get_triple(const json &j, const std::string &key, const std::string &path, bool allow_inf)
{
    const json &v = at(j, key, path);
    if (!v.is_array() || v.size() != 3)
        throw ConfigError(path + key + ": expected 3 values (direct, BS-surface, surface-user)");
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i)
    {
        if (v[i].is_number())
            out[i] = v[i].get<double>();
        else if (allow_inf && v[i].is_string() && v[i].get<std::string>() == "inf")
            out[i] = std::numeric_limits<double>::infinity();
        else
            throw ConfigError(path + key + "[" + std::to_string(i) + "]: expected a number" +
                              (allow_inf ? " or \"inf\"" : ""));
    }
    return out;
}

Mode get_mode(const std::string &s, const std::string &where)
{
    try
    {
        return mode_from_string(s);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(where + ": " + e.what());
    }
}

// Overlays `user` onto `base`, rejecting keys the base does not define.
void strict_merge(json &base, const json &user, const std::string &path)
{
    if (!user.is_object())
        throw ConfigError((path.empty() ? std::string("config") : path) + ": expected an object");
    for (const auto &[key, value] : user.items())
    {
        if (!base.contains(key))
            throw ConfigError("unknown key '" + path + key + "'");
        json &slot = base[key];
        if (slot.is_object())
            strict_merge(slot, value, path + key + ".");
        else
            slot = value;
    }
}

template <typename F>
auto validated(const std::string &where, F &&f)
{
    try
    {
        return f();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(where + ": " + e.what());
    }
}

} // namespace

json profile_defaults(const std::string &profile)
{
    json d = common_defaults();
    if (profile == "desk")
        return d;
    if (profile == "paper")
    {
        d["profile"] = "paper";
        d["episodes"] = 200000;
        d["steps_per_episode"] = 1000;
        d["system"]["n_ris"] = 50;
        d["system"]["n_active"] = 4;
        d["sweep_k"]["k_values"] = {0, 2, 4, 6, 8, 10};
        d["bench_runtime"]["n_values"] = {50, 75, 100, 125, 150};
        return d;
    }
    throw ConfigError("profile: unknown value '" + profile + "' (expected desk|paper)");
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string ExperimentConfig::hash() const
{
    char buf[17];
    // Where results go and how many threads compute them do not change them.
    json key = effective;
    key.erase("output_dir");
    key.erase("workers");
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key.dump())));
    return buf;
}

EnvSpec ExperimentConfig::env(Mode m, std::optional<std::size_t> n_ris, std::optional<std::size_t> k_active) const
{
    SystemConfig cfg = system;
    if (n_ris)
        cfg.n_ris = *n_ris;
    if (k_active)
        cfg.n_active = *k_active;
    const bool custom_set = fixed_active_set && !n_ris && !k_active;
    return validated("system", [&] {
        return EnvSpec::make(cfg, geometry, m, custom_set ? fixed_active_set : std::nullopt);
    });
}

ExperimentConfig make_config(const json &user, const Overrides &ov)
{
    if (!user.is_null() && !user.is_object())
        throw ConfigError("config: top level must be a JSON object");

    std::string profile = "desk";
    if (user.is_object() && user.contains("profile"))
    {
        if (!user["profile"].is_string())
            throw ConfigError("profile: expected a string");
        profile = user["profile"].get<std::string>();
    }
    if (ov.profile)
        profile = *ov.profile;

    json eff = profile_defaults(profile);
    if (user.is_object())
        strict_merge(eff, user, "");
    eff["profile"] = profile;
    if (ov.seed)
        eff["seed"] = *ov.seed;
    if (ov.output_dir)
        eff["output_dir"] = ov.output_dir->string();
    if (ov.experiment)
        eff["experiment"] = *ov.experiment;
    if (ov.mode)
        eff["mode"] = *ov.mode;

    ExperimentConfig c;
    c.profile = profile;
    c.experiment = experiment_from_string(get_string(eff, "experiment", ""));
    c.mode = get_mode(get_string(eff, "mode", ""), "mode");
    c.seed = get_uint(eff, "seed", "");
    c.eval_seed = get_uint(eff, "eval_seed", "");
    c.episodes = get_size(eff, "episodes", "");
    c.steps_per_episode = get_size(eff, "steps_per_episode", "");
    c.eval_channels = get_size(eff, "eval_channels", "");
    c.workers = get_size(eff, "workers", "");
    c.output_dir = get_string(eff, "output_dir", "");
    if (c.episodes == 0)
        throw ConfigError("episodes: must be >= 1");
    if (c.steps_per_episode == 0)
        throw ConfigError("steps_per_episode: must be >= 1");
    if (c.eval_channels == 0)
        throw ConfigError("eval_channels: must be >= 1");
    if (c.output_dir.empty())
        throw ConfigError("output_dir: must not be empty");

    // Physical units are converted here and nowhere else.
    const json &s = eff["system"];
    c.system.n_tx = get_size(s, "n_tx", "system.");
    c.system.n_rx = get_size(s, "n_rx", "system.");
    c.system.n_streams = get_size(s, "n_streams", "system.");
    c.system.n_ris = get_size(s, "n_ris", "system.");
    c.system.n_active = get_size(s, "n_active", "system.");
    c.system.max_bs_power = dbm_to_watts(get_number(s, "max_bs_power_dbm", "system."));
    c.system.amp_factor = get_number(s, "amp_factor", "system.");
    const double bw = get_number(s, "bandwidth_hz", "system.");
    if (!(bw > 0.0))
        throw ConfigError("system.bandwidth_hz: must be > 0");
    c.system.noise_power = noise_power_watts(get_number(s, "noise_psd_dbm_hz", "system."), bw,
                                             get_number(s, "noise_figure_db", "system."));
    c.system.residual_si = db_to_linear(get_number(s, "residual_si_db", "system."));
    if (!s.at("fixed_active_set").is_null())
        c.fixed_active_set = get_size_list(s, "fixed_active_set", "system.");
    validated("system", [&] {
        c.system.validate();
        return 0;
    });

    const json &g = eff["geometry"];
    c.geometry.bs_pos = get_point(g, "bs_position", "geometry.");
    c.geometry.ris_pos = get_point(g, "ris_position", "geometry.");
    c.geometry.user_pos = get_point(g, "user_position", "geometry.");
    c.geometry.beta0_db = get_number(g, "beta0_db", "geometry.");
    c.geometry.d0 = get_number(g, "d0_m", "geometry.");
    c.geometry.exponents = get_triple(g, "path_loss_exponents", "geometry.", false);
    c.geometry.rician_k = get_triple(g, "rician_k", "geometry.", true);
    validated("geometry", [&] {
        c.geometry.validate();
        return 0;
    });

    const json &p = eff["ppo"];
    c.ppo.gamma = get_number(p, "gamma", "ppo.");
    c.ppo.lam = get_number(p, "lam", "ppo.");
    c.ppo.clip_eps = get_number(p, "clip_eps", "ppo.");
    c.ppo.lr_actor = get_number(p, "lr_actor", "ppo.");
    c.ppo.lr_critic = get_number(p, "lr_critic", "ppo.");
    c.ppo.batch_len = get_size(p, "batch_len", "ppo.");
    c.ppo.minibatch_size = get_size(p, "minibatch_size", "ppo.");
    c.ppo.epochs_per_update = get_size(p, "epochs_per_update", "ppo.");
    c.ppo.entropy_coef = get_number(p, "entropy_coef", "ppo.");
    c.ppo.reward_scale = get_number(p, "reward_scale", "ppo.");
    c.ppo.hidden = get_size_list(p, "hidden", "ppo.");
    validated("ppo", [&] {
        c.ppo.validate();
        return 0;
    });

    const json &a = eff["ao"];
    c.ao.max_sweeps = get_size(a, "max_sweeps", "ao.");
    c.ao.se_tol = get_number(a, "se_tol", "ao.");
    c.ao.phase_grid = get_size(a, "phase_grid", "ao.");
    c.ao.restarts = get_size(a, "restarts", "ao.");
    c.ao.refine = get_bool(a, "refine", "ao.");
    validated("ao", [&] {
        c.ao.validate();
        return 0;
    });

    const json &sk = eff["sweep_k"];
    c.sweep.k_values = get_size_list(sk, "k_values", "sweep_k.");
    const json &modes = at(sk, "modes", "sweep_k.");
    if (!modes.is_array() || modes.empty())
        throw ConfigError("sweep_k.modes: expected a non-empty array of mode names");
    for (const auto &m : modes)
    {
        if (!m.is_string())
            throw ConfigError("sweep_k.modes: expected mode names");
        c.sweep.modes.push_back(get_mode(m.get<std::string>(), "sweep_k.modes"));
    }
    c.sweep.train_missing = get_bool(sk, "train_missing", "sweep_k.");
    if (c.sweep.k_values.empty())
        throw ConfigError("sweep_k.k_values: must not be empty");
    for (std::size_t k : c.sweep.k_values)
        if (k > c.system.n_ris)
            throw ConfigError("sweep_k.k_values: K = " + std::to_string(k) + " exceeds n_ris");

    const json &br = eff["bench_runtime"];
    c.runtime.n_values = get_size_list(br, "n_values", "bench_runtime.");
    c.runtime.trials = get_size(br, "trials", "bench_runtime.");
    c.runtime.warmup = get_size(br, "warmup", "bench_runtime.");
    if (c.runtime.n_values.empty())
        throw ConfigError("bench_runtime.n_values: must not be empty");
    for (std::size_t n : c.runtime.n_values)
        if (n < c.system.n_active)
            throw ConfigError("bench_runtime.n_values: N = " + std::to_string(n) + " is below n_active");
    if (c.runtime.trials < 100)
        throw ConfigError("bench_runtime.trials: at least 100 trials are required");

    // The default fixed set depends on N and K; validate a custom one now.
    c.env(Mode::fixed);

    c.effective = std::move(eff);
    return c;
}

ExperimentConfig load_config(const std::optional<std::filesystem::path> &path, const Overrides &ov)
{
    json user;
    if (path)
    {
        std::ifstream is(*path);
        if (!is)
            throw ConfigError("config file not found: " + path->string());
        try
        {
            user = json::parse(is);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(path->string() + ": invalid JSON (" + e.what() + ")");
        }
    }
    return make_config(user, ov);
}

} // namespace hris::bench
