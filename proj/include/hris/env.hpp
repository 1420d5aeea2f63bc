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

#include "hris/channel.hpp"
#include "hris/numerics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hris
{

// How the active elements of the surface are chosen.
enum class Mode
{
    passive, // no active elements
    fixed,   // a predetermined set of K elements
    dynamic, // K elements re-selected per channel realization
};

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s); // throws std::invalid_argument

// Per-element phase, amplitude and active set of the surface.
struct HrisConfig
{
    std::vector<double> phases;          // [0, 2pi)
    std::vector<double> amplitudes;      // amp_factor on active elements, 1 elsewhere
    std::vector<std::size_t> active_set; // sorted

    // Builds a config with amplitudes implied by the active set.
    static HrisConfig make(std::vector<double> phases, std::vector<std::size_t> active_set, double amp_factor);

    bool is_active(std::size_t n) const;
    std::size_t size() const { return phases.size(); }
};

struct Precoder
{
    CMat f; // n_tx x n_streams
};

// K elements evenly spread over the array: indices floor(i*N/K).
std::vector<std::size_t> evenly_spaced_active_set(std::size_t n, std::size_t k);

struct ThetaMatrices
{
    CMat theta;  // diag(alpha)
    CMat active; // J_A * theta
};

ThetaMatrices theta_matrix(const HrisConfig &h);

// H_d + H_r * Theta * H_t, using the diagonal structure of Theta.
CMat effective_channel(const HrisConfig &h, const ChannelSet &ch);

// sigma^2 (I + (1 + eta) H_r Theta_A Theta_A^H H_r^H).
CMat noise_covariance(const HrisConfig &h, const ChannelSet &ch, const SystemConfig &cfg);

// log2 det(I + H_eff F F^H H_eff^H R_n^{-1}) in bps/Hz, evaluated through the
// Cholesky factor of R_n. Does not enforce the power budget.
double spectral_efficiency(const Precoder &f, const HrisConfig &h, const ChannelSet &ch, const SystemConfig &cfg);

// Square-root large-scale gain per link, used to normalise the state.
struct LinkScales
{
    double direct = 1.0;
    double tx_ris = 1.0;
    double ris_rx = 1.0;

    static LinkScales from_geometry(const GeometryParams &geo);
};

// [vecRe(Hd); vecIm(Hd); vecRe(Ht); vecIm(Ht); vecRe(Hr); vecIm(Hr)], each
// block divided by its link scale.
std::vector<double> encode_state(const ChannelSet &ch, const LinkScales &scales);
ChannelSet decode_state(std::span<const double> state, const SystemConfig &cfg, const LinkScales &scales);

struct DecodedAction
{
    Precoder precoder;
    HrisConfig hris;
    bool zero_precoder_fallback = false; // raw precoder block was all zeros
};

// Maps a raw policy output onto the feasible set.
//   [0, 2*Nt*Ns)          Re/Im of F, rescaled to ||F||_F^2 = P_max
//   [.., + N)             amplitude logits; top-K picks the active set in dynamic mode
//   [.., + N)             u_n -> phi_n = pi * (tanh(u_n) + 1), wrapped into [0, 2pi)
DecodedAction decode_action(std::span<const double> raw, const SystemConfig &cfg, Mode mode,
                            std::span<const std::size_t> fixed_active_set = {});

// Raw vector that decodes back to (F, Theta) under `decode_action`.
std::vector<double> encode_action(const Precoder &f, const HrisConfig &h, const SystemConfig &cfg);

// Feasibility report against the power, modulus and phase-range constraints.
struct Feasibility
{
    double power_excess = 0.0;     // max(0, ||F||^2 - P_max)
    double passive_modulus_err = 0.0;
    double active_modulus_err = 0.0;
    bool phases_in_range = true;
    bool active_count_ok = true;

    bool ok(double power_tol = 1e-9, double modulus_tol = 0.0) const;
};

Feasibility check_feasibility(const Precoder &f, const HrisConfig &h, const SystemConfig &cfg, Mode mode);

// Everything the RL environment needs besides the per-step channel.
struct EnvSpec
{
    SystemConfig cfg;
    GeometryParams geo;
    Mode mode = Mode::dynamic;
    std::vector<std::size_t> fixed_active_set; // used in fixed mode

    // Uses the evenly spaced default when no set is given. A given set must
    // hold n_active distinct indices below n_ris (std::invalid_argument).
    static EnvSpec make(SystemConfig cfg, GeometryParams geo, Mode mode,
                        std::optional<std::vector<std::size_t>> fixed_set = std::nullopt);

    LinkScales scales() const { return LinkScales::from_geometry(geo); }
    DecodedAction decode(std::span<const double> raw) const;
};

struct EnvStep
{
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0; // bps/Hz
    std::vector<double> next_state;
    ChannelSet next_channels;
    bool zero_precoder_fallback = false;
};

// Reward for `raw_action` on `ch`; the next state is a fresh i.i.d. draw
// from `next_seed`.
EnvStep env_step(const EnvSpec &env, std::span<const double> raw_action, const ChannelSet &ch,
                 std::uint64_t next_seed);

} // namespace hris
