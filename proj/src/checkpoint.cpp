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


#include "hris/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace hris::ppo
{

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace
{

constexpr std::array<char, 8> magic{'H', 'R', 'I', 'S', 'C', 'K', 'P', 'T'};

using json = nlohmann::json;

struct NamedTensor
{
    std::string name;
    Tensor *tensor;
};

std::vector<NamedTensor> tensor_table(TrainState &st)
{
    std::vector<NamedTensor> out;
    auto add_mlp = [&out](const std::string &prefix, MlpParams &p) {
        for (std::size_t l = 0; l < p.layers(); ++l)
        {
            out.push_back({prefix + ".w" + std::to_string(l), &p.weights[l]});
            out.push_back({prefix + ".b" + std::to_string(l), &p.biases[l]});
        }
    };
    add_mlp("actor", st.actor.net);
    out.push_back({"actor.log_std", &st.actor.log_std});
    add_mlp("critic", st.critic);
    return out;
}

json stats_json(const UpdateStats &s)
{
    return {{"actor_loss", s.actor_loss}, {"value_loss", s.value_loss}, {"mean_ratio", s.mean_ratio},
            {"clip_fraction", s.clip_fraction}, {"kl", s.kl}, {"minibatches", s.minibatches}};
}

UpdateStats stats_from(const json &j)
{
    UpdateStats s;
    s.actor_loss = j.at("actor_loss");
    s.value_loss = j.at("value_loss");
    s.mean_ratio = j.at("mean_ratio");
    s.clip_fraction = j.at("clip_fraction");
    s.kl = j.at("kl");
    s.minibatches = j.at("minibatches");
    return s;
}

json progress_json(const Progress &p)
{
    json curve = json::array();
    for (const auto &e : p.curve)
        curve.push_back({e.episode, e.mean_se, e.mean_scaled_reward, e.clip_fraction, e.kl});
    return {{"step", p.step},
            {"updates", p.updates},
            {"episode_se", p.episode_se},
            {"episode_steps", p.episode_steps},
            {"last", stats_json(p.last)},
            {"curve", curve}};
}

Progress progress_from(const json &j)
{
    Progress p;
    p.step = j.at("step");
    p.updates = j.at("updates");
    p.episode_se = j.at("episode_se");
    p.episode_steps = j.at("episode_steps");
    p.last = stats_from(j.at("last"));
    for (const auto &e : j.at("curve"))
        p.curve.push_back({e.at(0).get<std::size_t>(), e.at(1).get<double>(), e.at(2).get<double>(),
                           e.at(3).get<double>(), e.at(4).get<double>()});
    return p;
}

void write_mat(std::ostream &os, const Mat &m)
{
    // Eigen storage is column-major; the table records the shape.
    os.write(reinterpret_cast<const char *>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void read_mat(std::istream &is, Mat &m, const std::string &name)
{
    is.read(reinterpret_cast<char *>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!is)
        throw CheckpointError("checkpoint truncated while reading " + name);
}

} // namespace

json to_json(const PpoHyper &hp)
{
    return {{"gamma", hp.gamma},
            {"lam", hp.lam},
            {"clip_eps", hp.clip_eps},
            {"lr_actor", hp.lr_actor},
            {"lr_critic", hp.lr_critic},
            {"batch_len", hp.batch_len},
            {"minibatch_size", hp.minibatch_size},
            {"epochs_per_update", hp.epochs_per_update},
            {"entropy_coef", hp.entropy_coef},
            {"reward_scale", hp.reward_scale},
            {"hidden", hp.hidden}};
}

PpoHyper hyper_from_json(const json &j)
{
    PpoHyper hp;
    hp.gamma = j.at("gamma");
    hp.lam = j.at("lam");
    hp.clip_eps = j.at("clip_eps");
    hp.lr_actor = j.at("lr_actor");
    hp.lr_critic = j.at("lr_critic");
    hp.batch_len = j.at("batch_len");
    hp.minibatch_size = j.at("minibatch_size");
    hp.epochs_per_update = j.at("epochs_per_update");
    hp.entropy_coef = j.at("entropy_coef");
    hp.reward_scale = j.at("reward_scale");
    hp.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    return hp;
}

void save_checkpoint(const std::filesystem::path &path, const TrainState &state, const json &meta)
{
    TrainState &st = const_cast<TrainState &>(state); // tensor_table only reads through the pointers here
    const auto table = tensor_table(st);

    json header;
    header["format"] = "hris-sim/ppo-checkpoint";
    header["version"] = checkpoint_version;
    header["hyper"] = to_json(state.hp);
    header["seed"] = state.seed;
    header["steps_per_episode"] = state.steps_per_episode;
    header["actor_dims"] = state.actor.net.dims;
    header["critic_dims"] = state.critic.dims;
    header["actor_adam_step"] = state.actor.net.adam_step;
    header["critic_adam_step"] = state.critic.adam_step;
    header["progress"] = progress_json(state.resume);
    header["meta"] = meta;
    json tensors = json::array();
    for (const auto &t : table)
        tensors.push_back({{"name", t.name}, {"rows", t.tensor->value.rows()}, {"cols", t.tensor->value.cols()}});
    header["tensors"] = tensors;

    const std::string text = header.dump();
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw CheckpointError("cannot open " + path.string() + " for writing");
    os.write(magic.data(), magic.size());
    const std::uint32_t version = checkpoint_version;
    const std::uint64_t len = text.size();
    os.write(reinterpret_cast<const char *>(&version), sizeof version);
    os.write(reinterpret_cast<const char *>(&len), sizeof len);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto &t : table)
    {
        write_mat(os, t.tensor->value);
        write_mat(os, t.tensor->m);
        write_mat(os, t.tensor->v);
    }
    if (!os)
        throw CheckpointError("write failed for " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw CheckpointError("cannot open checkpoint " + path.string());
    std::array<char, 8> m{};
    is.read(m.data(), m.size());
    if (!is || m != magic)
        throw CheckpointError(path.string() + " is not a checkpoint (bad magic)");
    std::uint32_t version = 0;
    std::uint64_t len = 0;
    is.read(reinterpret_cast<char *>(&version), sizeof version);
    is.read(reinterpret_cast<char *>(&len), sizeof len);
    if (!is || version != checkpoint_version)
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    std::string text(len, '\0');
    is.read(text.data(), static_cast<std::streamsize>(len));
    if (!is)
        throw CheckpointError("checkpoint header truncated");

    json header;
    try
    {
        header = json::parse(text);
        LoadedCheckpoint out;
        TrainState &st = out.state;
        st.hp = hyper_from_json(header.at("hyper"));
        st.seed = header.at("seed");
        st.steps_per_episode = header.at("steps_per_episode");

        // Shape the networks from the stored dims, then fill in the values.
        Rng dummy{0};
        const auto actor_dims = header.at("actor_dims").get<std::vector<std::size_t>>();
        const auto critic_dims = header.at("critic_dims").get<std::vector<std::size_t>>();
        st.actor.net = MlpParams::init(actor_dims, dummy);
        st.actor.log_std = Tensor(Mat::Zero(static_cast<Eigen::Index>(actor_dims.back()), 1));
        st.critic = MlpParams::init(critic_dims, dummy);
        st.actor.net.adam_step = header.at("actor_adam_step");
        st.critic.adam_step = header.at("critic_adam_step");
        st.resume = progress_from(header.at("progress"));
        st.progress = st.resume;
        out.meta = header.value("meta", json::object());

        const auto table = tensor_table(st);
        const auto &stored = header.at("tensors");
        if (stored.size() != table.size())
            throw CheckpointError("tensor table does not match the network layout");
        for (std::size_t i = 0; i < table.size(); ++i)
        {
            const auto &e = stored[i];
            Tensor &t = *table[i].tensor;
            if (e.at("name") != table[i].name || e.at("rows") != t.value.rows() || e.at("cols") != t.value.cols())
                throw CheckpointError("tensor " + table[i].name + " does not match the stored shape");
            read_mat(is, t.value, table[i].name);
            read_mat(is, t.m, table[i].name);
            read_mat(is, t.v, table[i].name);
        }
        return out;
    }
    catch (const json::exception &e)
    {
        throw CheckpointError(std::string("malformed checkpoint header: ") + e.what());
    }
}

} // namespace hris::ppo
