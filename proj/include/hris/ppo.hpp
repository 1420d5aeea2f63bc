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

#include "hris/env.hpp"
#include "hris/mlp.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hris::ppo
{

inline constexpr double log_std_min = -5.0;
inline constexpr double log_std_max = 2.0;

struct PpoHyper
{
    double gamma = 0.99;
    double lam = 0.95;
    double clip_eps = 0.2;
    double lr_actor = 1e-3;
    double lr_critic = 1e-3;
    std::size_t batch_len = 2048;
    std::size_t minibatch_size = 256;
    std::size_t epochs_per_update = 10;
    double entropy_coef = 0.0;
    double reward_scale = 10.0;
    std::vector<std::size_t> hidden{256, 256};

    void validate() const; // throws std::invalid_argument
};

// Diagonal Gaussian policy: MLP mean head plus a state-independent log-std.
struct Actor
{
    MlpParams net;
    Tensor log_std; // action_dim x 1, clamped to [log_std_min, log_std_max]

    static Actor init(std::size_t state_dim, std::size_t action_dim, const std::vector<std::size_t> &hidden, Rng &rng);
    std::size_t action_dim() const { return net.out_dim(); }
    bool all_finite() const { return net.all_finite() && log_std.value.allFinite(); }
};

MlpParams init_critic(std::size_t state_dim, const std::vector<std::size_t> &hidden, Rng &rng);

struct PolicyOutput
{
    Vec mean;
    Vec log_std;
};

PolicyOutput actor_forward(const Actor &actor, const Vec &state);

double gaussian_log_prob(const Vec &action, const Vec &mean, const Vec &log_std);

// mean + exp(log_std) * z with z ~ N(0, I).
Vec sample_action(const PolicyOutput &pi, Rng &rng);

// Deterministic action: the policy mean.
Vec infer(const Actor &actor, const Vec &state);

double critic_value(const MlpParams &critic, const Vec &state);

// ---- Advantage estimation -----------------------------------------------

double td_error(double reward, double v_next, double v, double gamma);

// A_t = sum_k (gamma*lam)^k delta_{t+k}, by backward recursion.
std::vector<double> gae(std::span<const double> deltas, double gamma, double lam);

double value_target(double advantage, double v_old);

// min(p*A, clip(p, 1-eps, 1+eps)*A)
double clipped_objective(double ratio, double advantage, double eps);

struct Trajectory
{
    Mat states;  // state_dim x T
    Mat actions; // action_dim x T
    std::vector<double> log_probs;
    std::vector<double> rewards; // raw bps/Hz
    std::vector<double> values;
    std::vector<double> next_values;
    std::vector<double> advantages;
    std::vector<double> targets;

    Trajectory() = default;
    Trajectory(std::size_t state_dim, std::size_t action_dim, std::size_t capacity);

    std::size_t size() const { return rewards.size(); }
    void push(const Vec &state, const Vec &action, double log_prob, double reward, double value);

    // TD errors on reward / reward_scale, GAE, and value targets.
    void compute_advantages(const PpoHyper &hp);
};

// ---- Losses -------------------------------------------------------------

struct ActorLoss
{
    double loss = 0.0; // -(mean clipped surrogate + entropy_coef * entropy)
    MlpGrads net;
    Vec d_log_std;
    double mean_ratio = 0.0;
    double clip_fraction = 0.0;
    double kl = 0.0; // mean((p - 1) - ln p)
};

// Columns of `states`/`actions` are samples.
ActorLoss actor_loss(const Actor &actor, const Mat &states, const Mat &actions, std::span<const double> old_log_probs,
                     std::span<const double> advantages, double clip_eps, double entropy_coef);

struct CriticLoss
{
    double loss = 0.0; // mean (V - target)^2
    MlpGrads net;
};

CriticLoss critic_loss(const MlpParams &critic, const Mat &states, std::span<const double> targets);

struct NonFiniteGradient : std::runtime_error
{
    NonFiniteGradient(std::size_t epoch_, std::size_t minibatch_)
        : std::runtime_error("non-finite gradient in epoch " + std::to_string(epoch_) + ", minibatch " +
                             std::to_string(minibatch_)),
          epoch(epoch_), minibatch(minibatch_) {}
    std::size_t epoch;
    std::size_t minibatch;
};

struct UpdateStats
{
    double actor_loss = 0.0;
    double value_loss = 0.0;
    double mean_ratio = 1.0;
    double clip_fraction = 0.0;
    double kl = 0.0;
    std::size_t minibatches = 0;
};

// Clipped-surrogate actor and MSE critic updates over shuffled minibatches.
// Advantages are normalised per batch. Parameters are left untouched if a
// non-finite gradient is hit.
UpdateStats ppo_update(Actor &actor, MlpParams &critic, const Trajectory &traj, const PpoHyper &hp, Rng &rng);

// ---- Training -----------------------------------------------------------

struct EpisodeLog
{
    std::size_t episode = 0;
    double mean_se = 0.0;
    double mean_scaled_reward = 0.0;
    double clip_fraction = 0.0;
    double kl = 0.0;
};

struct Progress
{
    std::uint64_t step = 0; // global environment step
    std::uint64_t updates = 0;
    double episode_se = 0.0;
    std::size_t episode_steps = 0;
    UpdateStats last;
    std::vector<EpisodeLog> curve;
};

struct TrainState
{
    Actor actor;
    MlpParams critic;
    PpoHyper hp;
    std::uint64_t seed = 0;
    std::size_t steps_per_episode = 1;
    Progress progress;
    // Progress at the start of the batch being collected. Parameters have
    // not changed since then, so resuming from here replays the batch exactly.
    Progress resume;
};

TrainState init_training(const EnvSpec &env, const PpoHyper &hp, std::size_t steps_per_episode, std::uint64_t seed);

// Channel realization seen at a given global step.
ChannelSet training_channel(const EnvSpec &env, std::uint64_t seed, std::uint64_t step);

// Runs rollouts and updates until `total_episodes` episodes are logged,
// starting from `state.resume`. Calling it again with a larger count, or on a
// reloaded checkpoint, gives the same result as one uninterrupted call.
// `on_episode` is called after each logged episode.
void train(TrainState &state, const EnvSpec &env, std::size_t total_episodes,
           const std::function<void(const EpisodeLog &)> &on_episode = {});

} // namespace hris::ppo
