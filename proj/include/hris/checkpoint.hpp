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

#include "hris/ppo.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>

namespace hris::ppo
{

inline constexpr std::uint32_t checkpoint_version = 1;

struct CheckpointError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// File layout (little endian):
//   8 bytes  magic "HRISCKPT"
//   u32      format version
//   u64      header length L
//   L bytes  JSON header: hyperparameters, progress, caller metadata and
//            the ordered tensor table {name, rows, cols}
//   f64[]    for every tensor in table order: value, Adam m, Adam v
//
// The stored progress is the resume point, so loading and calling train()
// continues exactly where an uninterrupted run would be.
void save_checkpoint(const std::filesystem::path &path, const TrainState &state, const nlohmann::json &meta = {});

struct LoadedCheckpoint
{
    TrainState state;
    nlohmann::json meta;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path &path);

nlohmann::json to_json(const PpoHyper &hp);
PpoHyper hyper_from_json(const nlohmann::json &j);

} // namespace hris::ppo
