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


#include "hris/mlp.hpp"

#include <cmath>

namespace hris::ppo
{

void adam_update(Tensor &t, const Mat &grad, const AdamConfig &cfg, std::uint64_t step)
{
    t.m = cfg.beta1 * t.m + (1.0 - cfg.beta1) * grad;
    t.v = cfg.beta2 * t.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    t.value.array() -= cfg.lr * (t.m.array() / c1) / ((t.v.array() / c2).sqrt() + cfg.eps);
}

MlpParams MlpParams::init(std::vector<std::size_t> dims, Rng &rng, double output_scale)
{
    MlpParams p;
    p.dims = std::move(dims);
    for (std::size_t l = 0; l + 1 < p.dims.size(); ++l)
    {
        const auto in = static_cast<Eigen::Index>(p.dims[l]);
        const auto out = static_cast<Eigen::Index>(p.dims[l + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> uni(-bound, bound);
        Mat w(out, in);
        for (Eigen::Index j = 0; j < in; ++j)
            for (Eigen::Index i = 0; i < out; ++i)
                w(i, j) = uni(rng);
        if (l + 2 == p.dims.size())
            w *= output_scale;
        p.weights.emplace_back(std::move(w));
        p.biases.emplace_back(Mat::Zero(out, 1));
    }
    return p;
}

bool MlpParams::all_finite() const
{
    for (std::size_t l = 0; l < weights.size(); ++l)
        if (!weights[l].value.allFinite() || !biases[l].value.allFinite())
            return false;
    return true;
}

bool MlpGrads::all_finite() const
{
    for (std::size_t l = 0; l < dw.size(); ++l)
        if (!dw[l].allFinite() || !db[l].allFinite())
            return false;
    return true;
}

Mat mlp_forward(const MlpParams &p, const Mat &x, MlpCache *cache)
{
    if (cache)
    {
        cache->inputs.clear();
        cache->pre.clear();
    }
    Mat a = x;
    for (std::size_t l = 0; l < p.layers(); ++l)
    {
        if (cache)
            cache->inputs.push_back(a);
        Mat z = p.weights[l].value * a;
        z.colwise() += p.biases[l].value.col(0);
        if (l + 1 == p.layers())
            return z;
        if (cache)
            cache->pre.push_back(z);
        a = z.cwiseMax(0.0);
    }
    return a;
}

Vec mlp_forward(const MlpParams &p, const Vec &x)
{
    Vec a = x;
    for (std::size_t l = 0; l < p.layers(); ++l)
    {
        Vec z = p.weights[l].value * a + p.biases[l].value.col(0);
        if (l + 1 == p.layers())
            return z;
        a = z.cwiseMax(0.0);
    }
    return a;
}

MlpGrads mlp_backward(const MlpParams &p, const MlpCache &cache, const Mat &d_out)
{
    const std::size_t n = p.layers();
    MlpGrads g;
    g.dw.resize(n);
    g.db.resize(n);
    Mat dz = d_out;
    for (std::size_t l = n; l-- > 0;)
    {
        g.dw[l] = dz * cache.inputs[l].transpose();
        g.db[l] = dz.rowwise().sum();
        if (l == 0)
            break;
        Mat da = p.weights[l].value.transpose() * dz;
        dz = (cache.pre[l - 1].array() > 0.0).select(da, 0.0);
    }
    return g;
}

void adam_update(MlpParams &p, const MlpGrads &g, const AdamConfig &cfg)
{
    ++p.adam_step;
    for (std::size_t l = 0; l < p.layers(); ++l)
    {
        adam_update(p.weights[l], g.dw[l], cfg, p.adam_step);
        adam_update(p.biases[l], g.db[l], cfg, p.adam_step);
    }
}

} // namespace hris::ppo
