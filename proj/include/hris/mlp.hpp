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

#include "hris/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hris::ppo
{

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// A parameter tensor together with its Adam moments.
struct Tensor
{
    Mat value;
    Mat m; // first moment
    Mat v; // second moment

    explicit Tensor(Mat init = {}) : value(std::move(init)), m(Mat::Zero(value.rows(), value.cols())),
                                     v(Mat::Zero(value.rows(), value.cols())) {}
};

struct AdamConfig
{
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// One Adam step on `t` given its gradient; `step` is the 1-based step count.
void adam_update(Tensor &t, const Mat &grad, const AdamConfig &cfg, std::uint64_t step);

// Fully connected ReLU network: dims = {in, hidden..., out}, linear output.
struct MlpParams
{
    std::vector<std::size_t> dims;
    std::vector<Tensor> weights; // out x in
    std::vector<Tensor> biases;  // out x 1
    std::uint64_t adam_step = 0;

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases, output
    // layer multiplied by `output_scale`.
    static MlpParams init(std::vector<std::size_t> dims, Rng &rng, double output_scale = 1.0);

    std::size_t layers() const { return weights.size(); }
    std::size_t in_dim() const { return dims.front(); }
    std::size_t out_dim() const { return dims.back(); }
    bool all_finite() const;
};

struct MlpGrads
{
    std::vector<Mat> dw;
    std::vector<Vec> db;

    bool all_finite() const;
};

// Activations kept for the backward pass; column i is sample i.
struct MlpCache
{
    std::vector<Mat> inputs; // input to each layer
    std::vector<Mat> pre;    // pre-activation of each hidden layer
};

// Batched forward pass; x is in_dim x batch.
Mat mlp_forward(const MlpParams &p, const Mat &x, MlpCache *cache = nullptr);

// Single-sample forward without caching.
Vec mlp_forward(const MlpParams &p, const Vec &x);

// Reverse pass given d(loss)/d(output) for the cached batch.
MlpGrads mlp_backward(const MlpParams &p, const MlpCache &cache, const Mat &d_out);

void adam_update(MlpParams &p, const MlpGrads &g, const AdamConfig &cfg);

} // namespace hris::ppo
