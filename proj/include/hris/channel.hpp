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

#include "hris/numerics.hpp"
#include "hris/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace hris
{

inline constexpr double pi = 3.14159265358979323846;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }

// Thermal noise power in watts for a PSD in dBm/Hz, bandwidth and noise figure.
double noise_power_watts(double psd_dbm_hz, double bandwidth_hz, double noise_figure_db);

// Link parameters, all linear units. dB quantities are converted when the
// config is built, never afterwards.
struct SystemConfig
{
    std::size_t n_tx = 4;
    std::size_t n_rx = 2;
    std::size_t n_streams = 2;
    std::size_t n_ris = 50;
    std::size_t n_active = 4;
    double max_bs_power = 10.0;   // W (40 dBm)
    double amp_factor = 10.0;
    double noise_power = noise_power_watts(-169.0, 20e6, 10.0);
    double residual_si = db_to_linear(1.0);

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    std::size_t state_dim() const { return 2 * (n_rx * n_tx + n_ris * n_tx + n_rx * n_ris); }
    std::size_t action_dim() const { return 2 * n_tx * n_streams + 2 * n_ris; }
};

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(Point2 a, Point2 b);

enum class Link : std::size_t
{
    direct = 0, // BS -> user
    tx_ris = 1, // BS -> HRIS
    ris_rx = 2, // HRIS -> user
};

struct GeometryParams
{
    Point2 bs_pos{0.0, 0.0};
    Point2 ris_pos{50.0, 0.0};
    Point2 user_pos{45.0, 2.0};
    double beta0_db = -30.0;
    double d0 = 1.0;
    std::array<double, 3> exponents{3.5, 2.2, 2.0};
    // Rician K per link; +inf means pure line of sight.
    std::array<double, 3> rician_k{0.0, 1.0, std::numeric_limits<double>::infinity()};

    void validate() const;

    double link_distance(Link link) const;
    double exponent(Link link) const { return exponents[static_cast<std::size_t>(link)]; }
    double rician(Link link) const { return rician_k[static_cast<std::size_t>(link)]; }

    // Large-scale power gain of a link.
    double link_gain(Link link) const;
};

double path_loss(double d, double exponent, const GeometryParams &geo);

// Half-wavelength ULA response: entry k = exp(j*pi*k*sin(angle)).
CMat steering_vector(std::size_t n_elements, double angle);

struct ChannelSet
{
    CMat h_direct; // n_rx x n_tx
    CMat h_tx_ris; // n_ris x n_tx
    CMat h_ris_rx; // n_rx x n_ris

    bool operator==(const ChannelSet &) const = default;
};

// Unit-modulus line-of-sight matrix of a link, before large-scale scaling.
CMat los_component(const SystemConfig &cfg, const GeometryParams &geo, Link link);

ChannelSet draw_channel(const SystemConfig &cfg, const GeometryParams &geo, Rng &rng);
ChannelSet draw_channel(const SystemConfig &cfg, const GeometryParams &geo, std::uint64_t seed);

} // namespace hris
