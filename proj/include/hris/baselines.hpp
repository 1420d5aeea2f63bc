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

#include <cstdint>
#include <vector>

namespace hris::ao
{

struct AoSettings
{
    std::size_t max_sweeps = 20;
    double se_tol = 1e-3; // bps/Hz
    std::size_t phase_grid = 64;
    std::size_t restarts = 4;
    bool refine = true; // golden-section refinement around the best grid phase

    void validate() const; // throws std::invalid_argument
};

struct PowerAllocation
{
    std::vector<double> powers;
    double water_level = 0.0;
};

// Maximises sum log(1 + g_i p_i) subject to sum p_i = total. Zero gains get
// zero power. The water level is located by bisection, then solved exactly on
// the resulting active set so the budget is met to rounding.
PowerAllocation waterfill_powers(const std::vector<double> &gains, double total);

struct WaterfillResult
{
    Precoder precoder;
    std::vector<double> gains; // squared singular values of the whitened channel, top n_streams
    PowerAllocation allocation;
    bool degenerate = false; // all modes vanished; uniform fallback used
};

// SE-optimal precoder for a fixed surface configuration.
WaterfillResult waterfill_precoder(const HrisConfig &h, const ChannelSet &ch, const SystemConfig &cfg);

struct SweepResult
{
    HrisConfig hris;
    double se_before = 0.0;
    double se_after = 0.0;
    std::vector<double> accepted; // SE after every accepted move, in order
};

// One sweep of per-element phase optimisation with F and the active set held
// fixed: coarse grid, optional golden-section refinement, keep the best.
SweepResult phase_coordinate_ascent(const Precoder &f, const HrisConfig &h, const ChannelSet &ch,
                                    const SystemConfig &cfg, const AoSettings &s);

// Activates k elements one at a time, each time the one that raises SE the
// most given F and the phases. Ties go to the lowest index.
std::vector<std::size_t> greedy_active_selection(const Precoder &f, const HrisConfig &h, const ChannelSet &ch,
                                                 const SystemConfig &cfg, std::size_t k);

struct AoResult
{
    Precoder precoder;
    HrisConfig hris;
    double se = 0.0;
    std::size_t sweeps = 0;                 // total over all restarts
    std::size_t best_restart = 0;
    std::vector<std::vector<double>> traces; // per restart, SE after every substep once the active set is final
};

// Alternating optimisation surrogate: water-filling precoder and phase
// coordinate ascent until the per-iteration gain drops below se_tol, best of
// several random restarts. In dynamic mode the active set is chosen greedily
// after the first iteration.
AoResult ao_optimize(const ChannelSet &ch, const SystemConfig &cfg, Mode mode,
                     const std::vector<std::size_t> &fixed_set, const AoSettings &s, std::uint64_t seed);

struct BaselineResult
{
    Precoder precoder;
    HrisConfig hris;
    double se = 0.0;
};

// Random phases, random (dynamic) or given (fixed) active set, water-filled F.
BaselineResult random_baseline(const ChannelSet &ch, const SystemConfig &cfg, Mode mode,
                               const std::vector<std::size_t> &fixed_set, std::uint64_t seed);

} // namespace hris::ao
