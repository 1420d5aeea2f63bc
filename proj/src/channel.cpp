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


#include "hris/channel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hris
{

double noise_power_watts(double psd_dbm_hz, double bandwidth_hz, double noise_figure_db)
{
    return dbm_to_watts(psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

void SystemConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw std::invalid_argument("system config: " + msg); };
    if (n_tx == 0 || n_rx == 0)
        fail("n_tx and n_rx must be >= 1");
    if (n_streams == 0 || n_streams > std::min(n_tx, n_rx))
        fail("n_streams must be in [1, min(n_tx, n_rx)]");
    if (n_ris == 0)
        fail("n_ris must be >= 1");
    if (n_active > n_ris)
        fail("n_active must not exceed n_ris");
    if (!(amp_factor >= 1.0))
        fail("amp_factor must be >= 1");
    if (!(max_bs_power > 0.0) || !(noise_power > 0.0))
        fail("powers must be > 0");
    if (!(residual_si >= 0.0))
        fail("residual_si must be >= 0");
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace
{

struct Endpoints
{
    Point2 tx;
    Point2 rx;
};

Endpoints endpoints(const GeometryParams &geo, Link link)
{
    switch (link)
    {
    case Link::direct:
        return {geo.bs_pos, geo.user_pos};
    case Link::tx_ris:
        return {geo.bs_pos, geo.ris_pos};
    case Link::ris_rx:
        return {geo.ris_pos, geo.user_pos};
    }
    throw std::logic_error("unknown link");
}

struct LinkShape
{
    std::size_t rx;
    std::size_t tx;
};

LinkShape link_shape(const SystemConfig &cfg, Link link)
{
    switch (link)
    {
    case Link::direct:
        return {cfg.n_rx, cfg.n_tx};
    case Link::tx_ris:
        return {cfg.n_ris, cfg.n_tx};
    case Link::ris_rx:
        return {cfg.n_rx, cfg.n_ris};
    }
    throw std::logic_error("unknown link");
}

} // namespace

void GeometryParams::validate() const
{
    auto fail = [](const std::string &msg) { throw std::invalid_argument("geometry: " + msg); };
    for (Link l : {Link::direct, Link::tx_ris, Link::ris_rx})
        if (!(link_distance(l) > 0.0))
            fail("node positions must be distinct");
    for (double e : exponents)
        if (!(e > 0.0))
            fail("path-loss exponents must be > 0");
    for (double k : rician_k)
        if (!(k >= 0.0))
            fail("Rician factors must be >= 0");
    if (!(d0 > 0.0))
        fail("d0 must be > 0");
}

double GeometryParams::link_distance(Link link) const
{
    const auto e = endpoints(*this, link);
    return distance(e.tx, e.rx);
}

double GeometryParams::link_gain(Link link) const
{
    return path_loss(link_distance(link), exponent(link), *this);
}

double path_loss(double d, double exponent, const GeometryParams &geo)
{
    return db_to_linear(geo.beta0_db) * std::pow(d / geo.d0, -exponent);
}

CMat steering_vector(std::size_t n_elements, double angle)
{
    CMat a(n_elements, 1);
    const double s = std::sin(angle);
    for (std::size_t k = 0; k < n_elements; ++k)
        a(k, 0) = std::polar(1.0, pi * static_cast<double>(k) * s);
    return a;
}

CMat los_component(const SystemConfig &cfg, const GeometryParams &geo, Link link)
{
    const auto e = endpoints(geo, link);
    const auto dims = link_shape(cfg, link);
    const double departure = std::atan2(e.rx.y - e.tx.y, e.rx.x - e.tx.x);
    const double arrival = std::atan2(e.tx.y - e.rx.y, e.tx.x - e.rx.x);
    return matmul(steering_vector(dims.rx, arrival), adjoint(steering_vector(dims.tx, departure)));
}

namespace
{

CMat draw_link(const SystemConfig &cfg, const GeometryParams &geo, Link link, Rng &rng)
{
    const auto dims = link_shape(cfg, link);
    const double amp = std::sqrt(geo.link_gain(link));
    const double kappa = geo.rician(link);

    double los_w = 0.0;
    double nlos_w = 1.0;
    if (std::isinf(kappa))
    {
        los_w = 1.0;
        nlos_w = 0.0;
    }
    else
    {
        los_w = std::sqrt(kappa / (1.0 + kappa));
        nlos_w = std::sqrt(1.0 / (1.0 + kappa));
    }

    CMat h(dims.rx, dims.tx);
    if (nlos_w > 0.0)
    {
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
        for (auto &x : h.data())
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            x = nlos_w * cplx{re, im};
        }
    }
    if (los_w > 0.0)
    {
        const CMat los = los_component(cfg, geo, link);
        auto hd = h.data();
        auto ld = los.data();
        for (std::size_t i = 0; i < hd.size(); ++i)
            hd[i] += los_w * ld[i];
    }
    return scale(h, amp);
}

} // namespace

ChannelSet draw_channel(const SystemConfig &cfg, const GeometryParams &geo, Rng &rng)
{
    ChannelSet ch;
    ch.h_direct = draw_link(cfg, geo, Link::direct, rng);
    ch.h_tx_ris = draw_link(cfg, geo, Link::tx_ris, rng);
    ch.h_ris_rx = draw_link(cfg, geo, Link::ris_rx, rng);
    return ch;
}

ChannelSet draw_channel(const SystemConfig &cfg, const GeometryParams &geo, std::uint64_t seed)
{
    Rng rng{seed};
    return draw_channel(cfg, geo, rng);
}

} // namespace hris
