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


#include "hris/baselines.hpp"

#include "hris/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hris::ao
{

void AoSettings::validate() const
{
    if (max_sweeps < 1)
        throw std::invalid_argument("ao: max_sweeps must be >= 1");
    if (phase_grid < 2)
        throw std::invalid_argument("ao: phase_grid must be >= 2");
    if (!(se_tol > 0.0))
        throw std::invalid_argument("ao: se_tol must be > 0");
    if (restarts < 1)
        throw std::invalid_argument("ao: restarts must be >= 1");
}

// ---- Water-filling ------------------------------------------------------

PowerAllocation waterfill_powers(const std::vector<double> &gains, double total)
{
    PowerAllocation out;
    out.powers.assign(gains.size(), 0.0);
    std::vector<double> inv(gains.size(), std::numeric_limits<double>::infinity());
    double inv_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gains.size(); ++i)
        if (gains[i] > 0.0)
        {
            inv[i] = 1.0 / gains[i];
            inv_min = std::min(inv_min, inv[i]);
        }
    if (!std::isfinite(inv_min))
        return out;

    auto used = [&](double mu) {
        double acc = 0.0;
        for (double x : inv)
            acc += std::max(0.0, mu - x);
        return acc;
    };
    double lo = inv_min;
    double hi = inv_min + total;
    while (hi - lo > 1e-10 * total)
    {
        const double mid = 0.5 * (lo + hi);
        (used(mid) < total ? lo : hi) = mid;
    }

    // Exact level on the active set; shrink it if a mode falls below the level.
    std::vector<bool> active(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i)
        active[i] = inv[i] < hi;
    double mu = 0.0;
    for (;;)
    {
        double sum_inv = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < gains.size(); ++i)
            if (active[i])
            {
                sum_inv += inv[i];
                ++count;
            }
        mu = (total + sum_inv) / static_cast<double>(count);
        bool changed = false;
        for (std::size_t i = 0; i < gains.size(); ++i)
            if (active[i] && inv[i] >= mu)
            {
                active[i] = false;
                changed = true;
            }
        if (!changed)
            break;
    }
    out.water_level = mu;
    for (std::size_t i = 0; i < gains.size(); ++i)
        out.powers[i] = active[i] ? mu - inv[i] : 0.0;
    return out;
}

WaterfillResult waterfill_precoder(const HrisConfig &h, const ChannelSet &ch, const SystemConfig &cfg)
{
    const CMat l = cholesky(noise_covariance(h, ch, cfg));
    const CMat g = forward_substitute(l, effective_channel(h, ch));
    const Svd dec = svd(g);

    WaterfillResult out;
    const std::size_t ns = cfg.n_streams;
    out.gains.assign(ns, 0.0);
    bool any = false;
    for (std::size_t i = 0; i < ns && i < dec.s.size(); ++i)
    {
        if (dec.s[i] >= 1e-14)
            any = true;
        out.gains[i] = dec.s[i] * dec.s[i];
    }

    CMat f(cfg.n_tx, ns);
    if (!any)
    {
        out.degenerate = true;
        const double p = std::sqrt(cfg.max_bs_power / static_cast<double>(ns));
        for (std::size_t s = 0; s < ns; ++s)
            f(s, s) = p;
        out.allocation.powers.assign(ns, cfg.max_bs_power / static_cast<double>(ns));
        out.precoder.f = std::move(f);
        return out;
    }

    out.allocation = waterfill_powers(out.gains, cfg.max_bs_power);
    for (std::size_t s = 0; s < ns; ++s)
    {
        const double amp = std::sqrt(out.allocation.powers[s]);
        for (std::size_t t = 0; t < cfg.n_tx; ++t)
            f(t, s) = dec.v(t, s) * amp;
    }
    out.precoder.f = std::move(f);
    return out;
}

// ---- Phase coordinate ascent --------------------------------------------

namespace
{

// log2 det(I + B B^H) for a small dense B (rows x cols, row-major), with the
// Gram matrix taken on the smaller side.
class SmallLogdet
{
public:
    SmallLogdet(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), dim_(std::min(rows, cols))
    {
        m_.resize(dim_ * dim_);
    }

    double operator()(const cplx *b)
    {
        const bool by_rows = rows_ <= cols_;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j <= i; ++j)
            {
                cplx acc = i == j ? 1.0 : 0.0;
                if (by_rows)
                    for (std::size_t k = 0; k < cols_; ++k)
                        acc += b[i * cols_ + k] * std::conj(b[j * cols_ + k]);
                else
                    for (std::size_t k = 0; k < rows_; ++k)
                        acc += std::conj(b[k * cols_ + i]) * b[k * cols_ + j];
                m_[i * dim_ + j] = acc;
            }
        // In-place Cholesky on the lower triangle.
        double logdet = 0.0;
        for (std::size_t j = 0; j < dim_; ++j)
        {
            double d = m_[j * dim_ + j].real();
            for (std::size_t k = 0; k < j; ++k)
                d -= std::norm(m_[j * dim_ + k]);
            if (!(d > 0.0))
                throw NotPositiveDefinite("phase objective: non-positive pivot");
            const double ljj = std::sqrt(d);
            m_[j * dim_ + j] = ljj;
            logdet += std::log(ljj);
            for (std::size_t i = j + 1; i < dim_; ++i)
            {
                cplx acc = m_[i * dim_ + j];
                for (std::size_t k = 0; k < j; ++k)
                    acc -= m_[i * dim_ + k] * std::conj(m_[j * dim_ + k]);
                m_[i * dim_ + j] = acc / ljj;
            }
        }
        return 2.0 * logdet / std::log(2.0);
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t dim_;
    std::vector<cplx> m_;
};

double wrap_phase(double phi)
{
    constexpr double two_pi = 2.0 * pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0)
        phi += two_pi;
    if (phi >= two_pi)
        phi = 0.0;
    return phi;
}

bool strictly_better(double cand, double inc) { return cand > inc + 1e-12 * std::max(1.0, std::abs(inc)); }

} // namespace

SweepResult phase_coordinate_ascent(const Precoder &f, const HrisConfig &h, const ChannelSet &ch,
                                    const SystemConfig &cfg, const AoSettings &s)
{
    const std::size_t n_el = h.size();
    const std::size_t nr = cfg.n_rx;
    const std::size_t ns = f.f.cols();

    SweepResult out;
    out.hris = h;
    out.se_before = spectral_efficiency(f, h, ch, cfg);

    // The active set is fixed during the sweep, so is R_n and its factor.
    const CMat l = cholesky(noise_covariance(h, ch, cfg));
    const CMat wr = forward_substitute(l, ch.h_ris_rx);        // nr x N
    const CMat gt = matmul(ch.h_tx_ris, f.f);                   // N x ns
    CMat b = forward_substitute(l, matmul(effective_channel(h, ch), f.f)); // nr x ns

    SmallLogdet logdet(nr, ns);
    std::vector<cplx> c(nr * ns);
    std::vector<cplx> rest(nr * ns);
    std::vector<cplx> trial(nr * ns);

    auto objective = [&](double amp, double phi) {
        const cplx alpha = std::polar(amp, phi);
        for (std::size_t i = 0; i < trial.size(); ++i)
            trial[i] = rest[i] + alpha * c[i];
        return logdet(trial.data());
    };

    const double step = 2.0 * pi / static_cast<double>(s.phase_grid);
    for (std::size_t n = 0; n < n_el; ++n)
    {
        const double amp = out.hris.amplitudes[n];
        const double phi0 = out.hris.phases[n];
        const cplx alpha0 = std::polar(amp, phi0);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t k = 0; k < ns; ++k)
            {
                c[i * ns + k] = wr(i, n) * gt(n, k);
                rest[i * ns + k] = b(i, k) - alpha0 * c[i * ns + k];
            }

        const double incumbent = objective(amp, phi0);
        double best_phi = phi0;
        double best = incumbent;
        double grid_phi = 0.0;
        double grid_best = -std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < s.phase_grid; ++g)
        {
            const double phi = step * static_cast<double>(g);
            const double v = objective(amp, phi);
            if (v > grid_best)
            {
                grid_best = v;
                grid_phi = phi;
            }
        }
        double cand_phi = grid_phi;
        double cand = grid_best;
        if (s.refine)
        {
            constexpr double inv_phi = 0.6180339887498949;
            double lo = grid_phi - step;
            double hi = grid_phi + step;
            double x1 = hi - inv_phi * (hi - lo);
            double x2 = lo + inv_phi * (hi - lo);
            double f1 = objective(amp, x1);
            double f2 = objective(amp, x2);
            while (hi - lo > 1e-4)
            {
                if (f1 < f2)
                {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = objective(amp, x2);
                }
                else
                {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = objective(amp, x1);
                }
            }
            const double mid = 0.5 * (lo + hi);
            const double fm = objective(amp, mid);
            if (fm > cand)
            {
                cand = fm;
                cand_phi = mid;
            }
        }
        if (strictly_better(cand, best))
        {
            best = cand;
            best_phi = wrap_phase(cand_phi);
        }
        if (best_phi != phi0)
        {
            out.hris.phases[n] = best_phi;
            const cplx alpha = std::polar(amp, best_phi);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t k = 0; k < ns; ++k)
                    b(i, k) = rest[i * ns + k] + alpha * c[i * ns + k];
            out.accepted.push_back(best);
        }
    }
    out.se_after = spectral_efficiency(f, out.hris, ch, cfg);
    return out;
}

// ---- Greedy active-element selection ------------------------------------

std::vector<std::size_t> greedy_active_selection(const Precoder &f, const HrisConfig &h, const ChannelSet &ch,
                                                 const SystemConfig &cfg, std::size_t k)
{
    const std::size_t n_el = h.size();
    if (k > n_el)
        throw std::invalid_argument("greedy_active_selection: k exceeds the number of elements");
    std::vector<std::size_t> active;
    HrisConfig trial = HrisConfig::make(h.phases, {}, cfg.amp_factor);
    for (std::size_t round = 0; round < k; ++round)
    {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_n = n_el;
        for (std::size_t n = 0; n < n_el; ++n)
        {
            if (std::find(active.begin(), active.end(), n) != active.end())
                continue;
            auto cand = active;
            cand.push_back(n);
            trial = HrisConfig::make(h.phases, cand, cfg.amp_factor);
            const double v = spectral_efficiency(f, trial, ch, cfg);
            if (v > best)
            {
                best = v;
                best_n = n;
            }
        }
        active.push_back(best_n);
    }
    std::sort(active.begin(), active.end());
    return active;
}

// ---- Alternating optimisation -------------------------------------------

AoResult ao_optimize(const ChannelSet &ch, const SystemConfig &cfg, Mode mode,
                     const std::vector<std::size_t> &fixed_set, const AoSettings &s, std::uint64_t seed)
{
    s.validate();
    const std::size_t n_el = cfg.n_ris;
    AoResult best;
    best.se = -std::numeric_limits<double>::infinity();

    for (std::size_t r = 0; r < s.restarts; ++r)
    {
        Rng rng = make_rng(seed, Stream::ao_restart, r);
        std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
        std::vector<double> phases(n_el);
        for (auto &p : phases)
            p = uni(rng);

        std::vector<std::size_t> active;
        if (mode == Mode::fixed)
            active = fixed_set;
        bool selected = mode != Mode::dynamic || cfg.n_active == 0;
        HrisConfig h = HrisConfig::make(std::move(phases), active, cfg.amp_factor);

        std::vector<double> trace;
        double prev = -std::numeric_limits<double>::infinity();
        Precoder f;
        for (std::size_t it = 0; it < s.max_sweeps; ++it)
        {
            f = waterfill_precoder(h, ch, cfg).precoder;
            if (selected)
                trace.push_back(spectral_efficiency(f, h, ch, cfg));
            SweepResult sw = phase_coordinate_ascent(f, h, ch, cfg, s);
            h = std::move(sw.hris);
            ++best.sweeps;
            if (!selected)
            {
                h = HrisConfig::make(h.phases, greedy_active_selection(f, h, ch, cfg, cfg.n_active),
                                     cfg.amp_factor);
                selected = true;
                continue;
            }
            trace.push_back(sw.se_after);
            if (sw.se_after - prev < s.se_tol)
                break;
            prev = sw.se_after;
        }
        f = waterfill_precoder(h, ch, cfg).precoder;
        const double se = spectral_efficiency(f, h, ch, cfg);
        trace.push_back(se);
        best.traces.push_back(std::move(trace));
        if (se > best.se)
        {
            best.se = se;
            best.precoder = std::move(f);
            best.hris = std::move(h);
            best.best_restart = r;
        }
    }
    return best;
}

BaselineResult random_baseline(const ChannelSet &ch, const SystemConfig &cfg, Mode mode,
                               const std::vector<std::size_t> &fixed_set, std::uint64_t seed)
{
    Rng rng = make_rng(seed, Stream::baseline, 0);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
    std::vector<double> phases(cfg.n_ris);
    for (auto &p : phases)
        p = uni(rng);

    std::vector<std::size_t> active;
    if (mode == Mode::fixed)
        active = fixed_set;
    else if (mode == Mode::dynamic)
    {
        std::vector<std::size_t> all(cfg.n_ris);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        active.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cfg.n_active));
    }

    BaselineResult out;
    out.hris = HrisConfig::make(std::move(phases), std::move(active), cfg.amp_factor);
    out.precoder = waterfill_precoder(out.hris, ch, cfg).precoder;
    out.se = spectral_efficiency(out.precoder, out.hris, ch, cfg);
    return out;
}

} // namespace hris::ao
