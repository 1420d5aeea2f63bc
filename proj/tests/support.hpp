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


// Helpers shared by the unit tests: random draws and Eigen conversions used
// to build oracles that do not go through the library's own kernels.

#pragma once

#include "hris/numerics.hpp"
#include "hris/rng.hpp"

#include <Eigen/Dense>

#include <random>

namespace hris::test
{

using EMat = Eigen::MatrixXcd;

inline CMat random_cmat(std::size_t r, std::size_t c, Rng &rng, double sd = 1.0)
{
    std::normal_distribution<double> n(0.0, sd);
    CMat m(r, c);
    for (auto &x : m.data())
        x = {n(rng), n(rng)};
    return m;
}

inline EMat to_eigen(const CMat &m)
{
    EMat e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    return e;
}

inline CMat from_eigen(const EMat &e)
{
    CMat m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            m(r, c) = e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return m;
}

// ln det of a Hermitian positive-definite matrix from its eigenvalues.
inline double eigen_logdet(const CMat &m)
{
    Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(m));
    return es.eigenvalues().array().log().sum();
}

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double max_abs_diff(const CMat &a, const CMat &b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

} // namespace hris::test
