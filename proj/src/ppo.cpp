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


#include "hris/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hris::ppo
{

namespace
{

const double half_log_2pi = 0.5 * std::log(2.0 * 3.14159265358979323846);

Vec clamped_log_std(const Tensor &t)
{
    return t.value.col(0).cwiseMax(log_std_min).cwiseMin(log_std_max);
}

} // namespace

void PpoHyper::validate() const
{
    auto fail = [](const std::string &m) { throw std::invalid_argument("ppo: " + m); };
    if (!(gamma >= 0.0 && gamma <= 1.0))
        fail("gamma must be in [0, 1]");
    if (!(lam >= 0.0 && lam <= 1.0))
        fail("lam must be in [0, 1]");
    if (!(clip_eps > 0.0))
        fail("clip_eps must be > 0");
    if (!(lr_actor > 0.0) || !(lr_critic > 0.0))
        fail("learning rates must be > 0");
    if (batch_len == 0 || minibatch_size == 0 || epochs_per_update == 0)
        fail("batch_len, minibatch_size and epochs_per_update must be >= 1");
    if (!(entropy_coef >= 0.0))
        fail("entropy_coef must be >= 0");
    if (!(reward_scale > 0.0))
        fail("reward_scale must be > 0");
    if (hidden.empty() || std::find(hidden.begin(), hidden.end(), 0u) != hidden.end())
        fail("hidden layer widths must be >= 1");
}

Actor Actor::init(std::size_t state_dim, std::size_t action_dim, const std::vector<std::size_t> &hidden, Rng &rng)
{
    std::vector<std::size_t> dims{state_dim};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(action_dim);
    return Actor{MlpParams::init(std::move(dims), rng, 0.01),
                 Tensor(Mat::Zero(static_cast<Eigen::Index>(action_dim), 1))};
}

MlpParams init_critic(std::size_t state_dim, const std::vector<std::size_t> &hidden, Rng &rng)
{
    std::vector<std::size_t> dims{state_dim};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(1);
    return MlpParams::init(std::move(dims), rng);
}

PolicyOutput actor_forward(const Actor &actor, const Vec &state)
{
    return {mlp_forward(actor.net, state), clamped_log_std(actor.log_std)};
}

double gaussian_log_prob(const Vec &action, const Vec &mean, const Vec &log_std)
{
    double acc = 0.0;
    for (Eigen::Index j = 0; j < action.size(); ++j)
    {
        const double z = (action(j) - mean(j)) * std::exp(-log_std(j));
        acc += -0.5 * z * z - log_std(j) - half_log_2pi;
    }
    return acc;
}

Vec sample_action(const PolicyOutput &pi, Rng &rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec a(pi.mean.size());
    for (Eigen::Index j = 0; j < a.size(); ++j)
        a(j) = pi.mean(j) + std::exp(pi.log_std(j)) * gauss(rng);
    return a;
}

Vec infer(const Actor &actor, const Vec &state) { return mlp_forward(actor.net, state); }

double critic_value(const MlpParams &critic, const Vec &state) { return mlp_forward(critic, state)(0); }

// ---- Advantage estimation -----------------------------------------------

double td_error(double reward, double v_next, double v, double gamma) { return reward + gamma * v_next - v; }

std::vector<double> gae(std::span<const double> deltas, double gamma, double lam)
{
    std::vector<double> adv(deltas.size());
    double running = 0.0;
    for (std::size_t t = deltas.size(); t-- > 0;)
    {
        running = deltas[t] + gamma * lam * running;
        adv[t] = running;
    }
    return adv;
}

double value_target(double advantage, double v_old) { return advantage + v_old; }

double clipped_objective(double ratio, double advantage, double eps)
{
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    return std::min(ratio * advantage, clipped * advantage);
}

Trajectory::Trajectory(std::size_t state_dim, std::size_t action_dim, std::size_t capacity)
    : states(static_cast<Eigen::Index>(state_dim), 0), actions(static_cast<Eigen::Index>(action_dim), 0)
{
    states.resize(static_cast<Eigen::Index>(state_dim), static_cast<Eigen::Index>(capacity));
    actions.resize(static_cast<Eigen::Index>(action_dim), static_cast<Eigen::Index>(capacity));
    log_probs.reserve(capacity);
    rewards.reserve(capacity);
    values.reserve(capacity);
}

void Trajectory::push(const Vec &state, const Vec &action, double log_prob, double reward, double value)
{
    const auto i = static_cast<Eigen::Index>(rewards.size());
    if (i >= states.cols())
    {
        states.conservativeResize(Eigen::NoChange, std::max<Eigen::Index>(1, 2 * states.cols()));
        actions.conservativeResize(Eigen::NoChange, states.cols());
    }
    states.col(i) = state;
    actions.col(i) = action;
    log_probs.push_back(log_prob);
    rewards.push_back(reward);
    values.push_back(value);
}

void Trajectory::compute_advantages(const PpoHyper &hp)
{
    const std::size_t n = size();
    if (next_values.size() != n)
        throw std::logic_error("trajectory: next_values not filled");
    std::vector<double> deltas(n);
    for (std::size_t t = 0; t < n; ++t)
        deltas[t] = td_error(rewards[t] / hp.reward_scale, next_values[t], values[t], hp.gamma);
    advantages = gae(deltas, hp.gamma, hp.lam);
    targets.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        targets[t] = value_target(advantages[t], values[t]);
}

// ---- Losses -------------------------------------------------------------

ActorLoss actor_loss(const Actor &actor, const Mat &states, const Mat &actions, std::span<const double> old_log_probs,
                     std::span<const double> advantages, double clip_eps, double entropy_coef)
{
    const Eigen::Index batch = states.cols();
    const Eigen::Index da = actions.rows();
    const double inv_b = 1.0 / static_cast<double>(batch);

    MlpCache cache;
    const Mat mean = mlp_forward(actor.net, states, &cache);
    const Vec log_std = clamped_log_std(actor.log_std);
    const Vec inv_var = (-2.0 * log_std).array().exp();

    ActorLoss out;
    Mat d_mean(da, batch);
    out.d_log_std = Vec::Zero(da);
    double surrogate = 0.0;
    for (Eigen::Index i = 0; i < batch; ++i)
    {
        const Vec diff = actions.col(i) - mean.col(i);
        const double logp = gaussian_log_prob(actions.col(i), mean.col(i), log_std);
        const double ratio = std::exp(logp - old_log_probs[static_cast<std::size_t>(i)]);
        const double adv = advantages[static_cast<std::size_t>(i)];
        const double unclipped = ratio * adv;
        const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * adv;
        surrogate += std::min(unclipped, clipped);

        out.mean_ratio += ratio;
        out.kl += (ratio - 1.0) - std::log(ratio);
        if (std::abs(ratio - 1.0) > clip_eps)
            out.clip_fraction += 1.0;

        // d/dtheta of the active branch: the unclipped term carries A*p*dlogp,
        // the clipped one is constant in theta.
        const double w = unclipped <= clipped ? adv * ratio : 0.0;
        d_mean.col(i) = -inv_b * w * diff.cwiseProduct(inv_var);
        out.d_log_std.array() += -inv_b * w * (diff.array().square() * inv_var.array() - 1.0);
    }
    const double entropy = log_std.sum() + static_cast<double>(da) * (0.5 + half_log_2pi);
    out.loss = -(surrogate * inv_b + entropy_coef * entropy);
    out.d_log_std.array() -= entropy_coef;
    out.net = mlp_backward(actor.net, cache, d_mean);
    out.mean_ratio *= inv_b;
    out.kl *= inv_b;
    out.clip_fraction *= inv_b;
    return out;
}

CriticLoss critic_loss(const MlpParams &critic, const Mat &states, std::span<const double> targets)
{
    const Eigen::Index batch = states.cols();
    MlpCache cache;
    const Mat v = mlp_forward(critic, states, &cache);
    Mat d(1, batch);
    CriticLoss out;
    for (Eigen::Index i = 0; i < batch; ++i)
    {
        const double e = v(0, i) - targets[static_cast<std::size_t>(i)];
        out.loss += e * e;
        d(0, i) = 2.0 * e / static_cast<double>(batch);
    }
    out.loss /= static_cast<double>(batch);
    out.net = mlp_backward(critic, cache, d);
    return out;
}

UpdateStats ppo_update(Actor &actor_io, MlpParams &critic_io, const Trajectory &traj, const PpoHyper &hp, Rng &rng)
{
    const std::size_t n = traj.size();
    if (n == 0 || traj.advantages.size() != n || traj.targets.size() != n)
        throw std::logic_error("ppo_update: trajectory has no advantages");

    std::vector<double> adv = traj.advantages;
    const double mu = std::accumulate(adv.begin(), adv.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double a : adv)
        var += (a - mu) * (a - mu);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (double &a : adv)
        a = (a - mu) / (sd + 1e-8);

    Actor actor = actor_io;
    MlpParams critic = critic_io;
    const AdamConfig actor_adam{hp.lr_actor};
    const AdamConfig critic_adam{hp.lr_critic};

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const std::size_t mb = std::min(hp.minibatch_size, n);

    UpdateStats stats;
    for (std::size_t epoch = 0; epoch < hp.epochs_per_update; ++epoch)
    {
        std::shuffle(perm.begin(), perm.end(), rng);
        std::size_t mb_index = 0;
        for (std::size_t start = 0; start < n; start += mb, ++mb_index)
        {
            const std::size_t len = std::min(mb, n - start);
            Mat s(traj.states.rows(), static_cast<Eigen::Index>(len));
            Mat a(traj.actions.rows(), static_cast<Eigen::Index>(len));
            std::vector<double> old_lp(len), ad(len), tg(len);
            for (std::size_t k = 0; k < len; ++k)
            {
                const std::size_t i = perm[start + k];
                s.col(static_cast<Eigen::Index>(k)) = traj.states.col(static_cast<Eigen::Index>(i));
                a.col(static_cast<Eigen::Index>(k)) = traj.actions.col(static_cast<Eigen::Index>(i));
                old_lp[k] = traj.log_probs[i];
                ad[k] = adv[i];
                tg[k] = traj.targets[i];
            }

            const CriticLoss cl = critic_loss(critic, s, tg);
            const ActorLoss al = actor_loss(actor, s, a, old_lp, ad, hp.clip_eps, hp.entropy_coef);
            if (!cl.net.all_finite() || !al.net.all_finite() || !al.d_log_std.allFinite() || !std::isfinite(cl.loss) ||
                !std::isfinite(al.loss))
                throw NonFiniteGradient(epoch, mb_index);

            adam_update(critic, cl.net, critic_adam);
            adam_update(actor.net, al.net, actor_adam);
            adam_update(actor.log_std, al.d_log_std, actor_adam, actor.net.adam_step);
            actor.log_std.value = actor.log_std.value.cwiseMax(log_std_min).cwiseMin(log_std_max);

            stats.actor_loss += al.loss;
            stats.value_loss += cl.loss;
            stats.mean_ratio += al.mean_ratio;
            stats.clip_fraction += al.clip_fraction;
            stats.kl += al.kl;
            ++stats.minibatches;
        }
    }
    const double k = 1.0 / static_cast<double>(stats.minibatches);
    stats.actor_loss *= k;
    stats.value_loss *= k;
    stats.mean_ratio *= k;
    stats.clip_fraction *= k;
    stats.kl *= k;

    if (!actor.all_finite() || !critic.all_finite())
        throw NonFiniteGradient(hp.epochs_per_update, 0);
    actor_io = std::move(actor);
    critic_io = std::move(critic);
    return stats;
}

// ---- Training -----------------------------------------------------------

TrainState init_training(const EnvSpec &env, const PpoHyper &hp, std::size_t steps_per_episode, std::uint64_t seed)
{
    hp.validate();
    if (steps_per_episode == 0)
        throw std::invalid_argument("ppo: steps_per_episode must be >= 1");
    Rng rng = make_rng(seed, Stream::init, 0);
    TrainState st;
    st.actor = Actor::init(env.cfg.state_dim(), env.cfg.action_dim(), hp.hidden, rng);
    st.critic = init_critic(env.cfg.state_dim(), hp.hidden, rng);
    st.hp = hp;
    st.seed = seed;
    st.steps_per_episode = steps_per_episode;
    return st;
}

ChannelSet training_channel(const EnvSpec &env, std::uint64_t seed, std::uint64_t step)
{
    return draw_channel(env.cfg, env.geo, derive_seed(seed, Stream::channel, step));
}

void train(TrainState &st, const EnvSpec &env, std::size_t total_episodes,
           const std::function<void(const EpisodeLog &)> &on_episode)
{
    const PpoHyper &hp = st.hp;
    const std::size_t ds = env.cfg.state_dim();
    const std::size_t da = env.cfg.action_dim();
    if (st.actor.net.in_dim() != ds || st.actor.action_dim() != da)
        throw std::invalid_argument("train: network shapes do not match the environment");

    // Restart from the last batch boundary. Parameters have not moved since,
    // so the partial batch is replayed exactly.
    st.progress = st.resume;
    Progress &pg = st.progress;
    Trajectory traj(ds, da, hp.batch_len);
    ChannelSet ch = training_channel(env, st.seed, pg.step);

    while (pg.curve.size() < total_episodes)
    {
        const std::uint64_t t = pg.step;
        const Vec state = Eigen::Map<const Vec>(encode_state(ch, env.scales()).data(),
                                                static_cast<Eigen::Index>(ds));
        const PolicyOutput pi = actor_forward(st.actor, state);
        Rng noise = make_rng(st.seed, Stream::policy_noise, t);
        const Vec action = sample_action(pi, noise);
        const double logp = gaussian_log_prob(action, pi.mean, pi.log_std);
        const double value = critic_value(st.critic, state);

        EnvStep step = env_step(env, std::span<const double>(action.data(), da), ch,
                                derive_seed(st.seed, Stream::channel, t + 1));
        traj.push(state, action, logp, step.reward, value);
        ch = std::move(step.next_channels);
        ++pg.step;

        pg.episode_se += step.reward;
        ++pg.episode_steps;

        if (traj.size() == hp.batch_len)
        {
            traj.next_values.assign(traj.values.begin() + 1, traj.values.end());
            traj.next_values.push_back(
                critic_value(st.critic, Eigen::Map<const Vec>(step.next_state.data(), static_cast<Eigen::Index>(ds))));
            traj.compute_advantages(hp);
            Rng shuffle = make_rng(st.seed, Stream::minibatch, pg.updates);
            pg.last = ppo_update(st.actor, st.critic, traj, hp, shuffle);
            ++pg.updates;
            traj = Trajectory(ds, da, hp.batch_len);
        }

        const bool episode_done = pg.episode_steps == st.steps_per_episode;
        if (episode_done)
        {
            EpisodeLog log;
            log.episode = pg.curve.size();
            log.mean_se = pg.episode_se / static_cast<double>(pg.episode_steps);
            log.mean_scaled_reward = log.mean_se / hp.reward_scale;
            log.clip_fraction = pg.last.clip_fraction;
            log.kl = pg.last.kl;
            pg.curve.push_back(log);
            pg.episode_se = 0.0;
            pg.episode_steps = 0;
        }

        // Snapshot before the callback so a checkpoint written from inside it
        // is consistent with the current parameters.
        if (traj.size() == 0)
            st.resume = pg;
        if (episode_done && on_episode)
            on_episode(pg.curve.back());
    }
}

} // namespace hris::ppo
