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


#include "hris/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hris
{

std::string_view to_string(Mode m)
{
    switch (m)
    {
    case Mode::passive:
        return "passive";
    case Mode::fixed:
        return "fixed";
    case Mode::dynamic:
        return "dynamic";
    }
    return "unknown";
}

Mode mode_from_string(std::string_view s)
{
    if (s == "passive")
        return Mode::passive;
    if (s == "fixed")
        return Mode::fixed;
    if (s == "dynamic")
        return Mode::dynamic;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected passive|fixed|dynamic)");
}

HrisConfig HrisConfig::make(std::vector<double> phases, std::vector<std::size_t> active_set, double amp_factor)
{
    HrisConfig h;
    h.amplitudes.assign(phases.size(), 1.0);
    std::sort(active_set.begin(), active_set.end());
    for (std::size_t n : active_set)
    {
        if (n >= phases.size())
            throw std::out_of_range("active element index " + std::to_string(n) + " out of range");
        h.amplitudes[n] = amp_factor;
    }
    h.phases = std::move(phases);
    h.active_set = std::move(active_set);
    return h;
}

bool HrisConfig::is_active(std::size_t n) const
{
    return std::binary_search(active_set.begin(), active_set.end(), n);
}

std::vector<std::size_t> evenly_spaced_active_set(std::size_t n, std::size_t k)
{
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i)
        out[i] = i * n / k;
    return out;
}

ThetaMatrices theta_matrix(const HrisConfig &h)
{
    const std::size_t n = h.size();
    ThetaMatrices t{CMat(n, n), CMat(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        t.theta(i, i) = std::polar(h.amplitudes[i], h.phases[i]);
    for (std::size_t i : h.active_set)
        t.active(i, i) = t.theta(i, i);
    return t;
}

CMat effective_channel(const HrisConfig &h, const ChannelSet &ch)
{
    const CMat &hr = ch.h_ris_rx;
    if (hr.cols() != h.size() || ch.h_tx_ris.rows() != h.size())
        throw DimensionMismatch("effective_channel: surface size does not match channels");
    CMat scaled = hr;
    for (std::size_t n = 0; n < h.size(); ++n)
    {
        const cplx alpha = std::polar(h.amplitudes[n], h.phases[n]);
        for (std::size_t r = 0; r < hr.rows(); ++r)
            scaled(r, n) *= alpha;
    }
    return add(ch.h_direct, matmul(scaled, ch.h_tx_ris));
}

CMat noise_covariance(const HrisConfig &h, const ChannelSet &ch, const SystemConfig &cfg)
{
    const CMat &hr = ch.h_ris_rx;
    const std::size_t nr = hr.rows();
    CMat r = CMat::identity(nr);
    const double w = 1.0 + cfg.residual_si;
    for (std::size_t n : h.active_set)
    {
        const double a2 = h.amplitudes[n] * h.amplitudes[n];
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = i; j < nr; ++j)
                r(i, j) += w * a2 * hr(i, n) * std::conj(hr(j, n));
    }
    // Mirror the upper triangle so the result is exactly Hermitian.
    for (std::size_t i = 0; i < nr; ++i)
    {
        r(i, i) = r(i, i).real();
        for (std::size_t j = i + 1; j < nr; ++j)
            r(j, i) = std::conj(r(i, j));
    }
    return scale(r, cfg.noise_power);
}

double spectral_efficiency(const Precoder &f, const HrisConfig &h, const ChannelSet &ch, const SystemConfig &cfg)
{
    const CMat l = cholesky(noise_covariance(h, ch, cfg));
    const CMat w = forward_substitute(l, matmul(effective_channel(h, ch), f.f));
    CMat m = matmul(w, adjoint(w));
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        m(i, i) += 1.0;
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            m(j, i) = std::conj(m(i, j));
    }
    return hermitian_logdet(m) / std::log(2.0);
}

LinkScales LinkScales::from_geometry(const GeometryParams &geo)
{
    return {std::sqrt(geo.link_gain(Link::direct)), std::sqrt(geo.link_gain(Link::tx_ris)),
            std::sqrt(geo.link_gain(Link::ris_rx))};
}

std::vector<double> encode_state(const ChannelSet &ch, const LinkScales &scales)
{
    std::vector<double> s;
    s.reserve(2 * (ch.h_direct.size() + ch.h_tx_ris.size() + ch.h_ris_rx.size()));
    auto append = [&s](const CMat &m, double sc) {
        for (double x : vectorize_reim(m))
            s.push_back(x / sc);
    };
    append(ch.h_direct, scales.direct);
    append(ch.h_tx_ris, scales.tx_ris);
    append(ch.h_ris_rx, scales.ris_rx);
    return s;
}

ChannelSet decode_state(std::span<const double> state, const SystemConfig &cfg, const LinkScales &scales)
{
    if (state.size() != cfg.state_dim())
        throw DimensionMismatch("decode_state: expected " + std::to_string(cfg.state_dim()) + " entries");
    std::size_t off = 0;
    auto take = [&](std::size_t rows, std::size_t cols, double sc) {
        const std::size_t len = 2 * rows * cols;
        CMat m = devectorize_reim(state.subspan(off, len), rows, cols);
        off += len;
        return scale(m, sc);
    };
    ChannelSet ch;
    ch.h_direct = take(cfg.n_rx, cfg.n_tx, scales.direct);
    ch.h_tx_ris = take(cfg.n_ris, cfg.n_tx, scales.tx_ris);
    ch.h_ris_rx = take(cfg.n_rx, cfg.n_ris, scales.ris_rx);
    return ch;
}

namespace
{

std::vector<std::size_t> top_k(std::span<const double> logits, std::size_t k)
{
    std::vector<std::size_t> idx(logits.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          return logits[a] > logits[b] || (logits[a] == logits[b] && a < b);
                      });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

DecodedAction decode_action(std::span<const double> raw, const SystemConfig &cfg, Mode mode,
                            std::span<const std::size_t> fixed_active_set)
{
    if (raw.size() != cfg.action_dim())
        throw DimensionMismatch("decode_action: expected " + std::to_string(cfg.action_dim()) + " entries, got " +
                                std::to_string(raw.size()));
    const std::size_t nf = cfg.n_tx * cfg.n_streams;
    const std::size_t n = cfg.n_ris;

    DecodedAction out;
    CMat f = devectorize_reim(raw.subspan(0, 2 * nf), cfg.n_tx, cfg.n_streams);
    const double norm = frobenius_norm(f);
    if (norm == 0.0 || !std::isfinite(norm))
    {
        out.zero_precoder_fallback = true;
        f = CMat(cfg.n_tx, cfg.n_streams);
        const double p = std::sqrt(cfg.max_bs_power / static_cast<double>(cfg.n_streams));
        for (std::size_t s = 0; s < cfg.n_streams; ++s)
            f(s, s) = p;
    }
    else
    {
        f = scale(f, std::sqrt(cfg.max_bs_power) / norm);
    }
    out.precoder.f = std::move(f);

    std::vector<std::size_t> active;
    switch (mode)
    {
    case Mode::passive:
        break;
    case Mode::fixed:
        if (fixed_active_set.size() != cfg.n_active)
            throw std::invalid_argument("decode_action: fixed active set must have n_active entries");
        active.assign(fixed_active_set.begin(), fixed_active_set.end());
        break;
    case Mode::dynamic:
        active = top_k(raw.subspan(2 * nf, n), cfg.n_active);
        break;
    }

    std::vector<double> phases(n);
    const auto u = raw.subspan(2 * nf + n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double phi = pi * (std::tanh(u[i]) + 1.0);
        if (phi >= 2.0 * pi)
            phi -= 2.0 * pi;
        phases[i] = phi;
    }
    out.hris = HrisConfig::make(std::move(phases), std::move(active), cfg.amp_factor);
    return out;
}

std::vector<double> encode_action(const Precoder &f, const HrisConfig &h, const SystemConfig &cfg)
{
    std::vector<double> raw = vectorize_reim(f.f);
    raw.reserve(cfg.action_dim());
    for (std::size_t n = 0; n < cfg.n_ris; ++n)
        raw.push_back(h.is_active(n) ? 1.0 : 0.0);
    for (std::size_t n = 0; n < cfg.n_ris; ++n)
    {
        // atanh saturates at the ends of the range; +-20 is past tanh's double resolution.
        const double t = h.phases[n] / pi - 1.0;
        raw.push_back(t <= -1.0 ? -20.0 : (t >= 1.0 ? 20.0 : std::atanh(t)));
    }
    return raw;
}

bool Feasibility::ok(double power_tol, double modulus_tol) const
{
    return power_excess <= power_tol && passive_modulus_err <= modulus_tol && active_modulus_err <= modulus_tol &&
           phases_in_range && active_count_ok;
}

Feasibility check_feasibility(const Precoder &f, const HrisConfig &h, const SystemConfig &cfg, Mode mode)
{
    Feasibility r;
    r.power_excess = std::max(0.0, frobenius_norm_sq(f.f) - cfg.max_bs_power);
    for (std::size_t n = 0; n < h.size(); ++n)
    {
        if (h.is_active(n))
            r.active_modulus_err = std::max(r.active_modulus_err, std::abs(h.amplitudes[n] - cfg.amp_factor));
        else
            r.passive_modulus_err = std::max(r.passive_modulus_err, std::abs(h.amplitudes[n] - 1.0));
        if (!(h.phases[n] >= 0.0 && h.phases[n] < 2.0 * pi))
            r.phases_in_range = false;
    }
    const std::size_t expected = mode == Mode::passive ? 0 : cfg.n_active;
    r.active_count_ok = h.active_set.size() == expected;
    return r;
}

EnvSpec EnvSpec::make(SystemConfig cfg, GeometryParams geo, Mode mode, std::optional<std::vector<std::size_t>> fixed_set)
{
    cfg.validate();
    geo.validate();
    EnvSpec e;
    e.fixed_active_set = fixed_set ? std::move(*fixed_set) : evenly_spaced_active_set(cfg.n_ris, cfg.n_active);
    auto &fs = e.fixed_active_set;
    std::sort(fs.begin(), fs.end());
    if (fs.size() != cfg.n_active)
        throw std::invalid_argument("fixed active set must have exactly n_active entries");
    if (std::adjacent_find(fs.begin(), fs.end()) != fs.end() || (!fs.empty() && fs.back() >= cfg.n_ris))
        throw std::invalid_argument("fixed active set must hold distinct indices below n_ris");
    e.cfg = cfg;
    e.geo = geo;
    e.mode = mode;
    return e;
}

DecodedAction EnvSpec::decode(std::span<const double> raw) const
{
    return decode_action(raw, cfg, mode, fixed_active_set);
}

EnvStep env_step(const EnvSpec &env, std::span<const double> raw_action, const ChannelSet &ch, std::uint64_t next_seed)
{
    const LinkScales sc = env.scales();
    const DecodedAction act = env.decode(raw_action);

    EnvStep step;
    step.state = encode_state(ch, sc);
    step.action.assign(raw_action.begin(), raw_action.end());
    step.reward = spectral_efficiency(act.precoder, act.hris, ch, env.cfg);
    step.zero_precoder_fallback = act.zero_precoder_fallback;
    step.next_channels = draw_channel(env.cfg, env.geo, next_seed);
    step.next_state = encode_state(step.next_channels, sc);
    return step;
}

} // namespace hris
