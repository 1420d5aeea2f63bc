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


#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace hris;
using hris::test::random_cmat;

namespace
{

// Determinant by Gaussian elimination with partial pivoting.
cplx naive_det(CMat m)
{
    const std::size_t n = m.rows();
    cplx det{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(m(r, k)) > std::abs(m(p, k)))
                p = r;
        if (m(p, k) == cplx{})
            return {};
        if (p != k)
        {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(m(p, c), m(k, c));
            det = -det;
        }
        det *= m(k, k);
        for (std::size_t r = k + 1; r < n; ++r)
        {
            const cplx f = m(r, k) / m(k, k);
            for (std::size_t c = k; c < n; ++c)
                m(r, c) -= f * m(k, c);
        }
    }
    return det;
}

CMat random_hpd(std::size_t n, Rng &rng)
{
    const CMat b = random_cmat(n, n, rng);
    return b * adjoint(b) + CMat::identity(n);
}

} // namespace

TEST_CASE("identity has zero log-determinant", "[numerics]")
{
    for (std::size_t n : {1u, 2u, 5u})
        CHECK(hermitian_logdet(CMat::identity(n)) == 0.0);
}

TEST_CASE("logdet of diag(2,3) is ln 6", "[numerics]")
{
    const CMat m = CMat::diagonal(std::vector<double>{2.0, 3.0});
    CHECK(std::abs(hermitian_logdet(m) - std::log(6.0)) < 1e-14);
}

TEST_CASE("logdet matches a pivoted elimination determinant", "[numerics]")
{
    Rng rng{11};
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMat m = random_hpd(4, rng);
        const double want = std::log(std::abs(naive_det(m)));
        CHECK(test::rel_err(hermitian_logdet(m), want) < 1e-10);
    }
}

TEST_CASE("cholesky reproduces its input", "[numerics]")
{
    Rng rng{12};
    const CMat m = random_hpd(6, rng);
    const CMat l = cholesky(m);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = r + 1; c < 6; ++c)
            CHECK(l(r, c) == cplx{});
    CHECK(test::max_abs_diff(l * adjoint(l), m) < 1e-12 * max_abs(m));
}

TEST_CASE("indefinite and non-Hermitian inputs are rejected", "[numerics]")
{
    CHECK_THROWS_AS(cholesky(CMat::diagonal(std::vector<double>{1.0, -1.0})), NotPositiveDefinite);
    CHECK_THROWS_AS(hermitian_logdet(CMat{{1.0, 2.0}, {0.0, 1.0}}), NotHermitian);
    CHECK_THROWS_AS(hermitian_logdet(CMat(2, 3)), DimensionMismatch);
    // A tiny asymmetry well under the tolerance is accepted.
    CHECK_NOTHROW(hermitian_logdet(CMat{{2.0, 1e-13}, {0.0, 2.0}}));
}

TEST_CASE("hermitian inverse is an inverse and exactly Hermitian", "[numerics]")
{
    Rng rng{13};
    const CMat m = random_hpd(5, rng);
    const CMat inv = hermitian_inverse(m);
    CHECK(test::max_abs_diff(m * inv, CMat::identity(5)) < 1e-10);
    CHECK(inv == adjoint(inv));
}

TEST_CASE("matrix products check dimensions", "[numerics]")
{
    CHECK_THROWS_AS(CMat(2, 3) * CMat(2, 3), DimensionMismatch);
    CHECK_THROWS_AS(CMat(2, 3) + CMat(3, 2), DimensionMismatch);
}

TEST_CASE("adjoint is an involution and reverses products", "[numerics]")
{
    Rng rng{14};
    for (int trial = 0; trial < 20; ++trial)
    {
        const CMat a = random_cmat(3, 4, rng);
        const CMat b = random_cmat(4, 2, rng);
        CHECK(adjoint(adjoint(a)) == a);
        CHECK(test::max_abs_diff(adjoint(a * b), adjoint(b) * adjoint(a)) < 1e-13);
    }
}

TEST_CASE("Frobenius norm of a known matrix", "[numerics]")
{
    const CMat m{{cplx{3, 4}, 0.0}, {0.0, cplx{0, 12}}};
    CHECK(frobenius_norm_sq(m) == 169.0);
    CHECK(frobenius_norm(m) == 13.0);
}

TEST_CASE("Re/Im vectorisation is column-major and invertible", "[numerics]")
{
    const CMat m{{cplx{1, 5}, cplx{2, 6}}, {cplx{3, 7}, cplx{4, 8}}};
    const std::vector<double> want{1, 3, 2, 4, 5, 7, 6, 8};
    CHECK(vectorize_reim(m) == want);
    CHECK(devectorize_reim(want, 2, 2) == m);
    CHECK_THROWS_AS(devectorize_reim(want, 3, 2), DimensionMismatch);
}

TEST_CASE("SVD singular values match an independent eigen-solver", "[numerics]")
{
    Rng rng{15};
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 4}, {4, 2}, {3, 3}, {2, 50}, {50, 4}, {1, 5}};
    for (auto [r, c] : shapes)
    {
        const CMat m = random_cmat(r, c, rng);
        const Svd d = svd(m);
        const std::size_t k = std::min(r, c);
        REQUIRE(d.s.size() == k);

        // Oracle: eigenvalues of m m^H (or m^H m), largest first.
        const CMat g = r <= c ? m * adjoint(m) : adjoint(m) * m;
        Eigen::SelfAdjointEigenSolver<test::EMat> es(test::to_eigen(g));
        for (std::size_t i = 0; i < k; ++i)
        {
            const double ev = es.eigenvalues()(static_cast<Eigen::Index>(g.rows() - 1 - i));
            CHECK(test::rel_err(d.s[i] * d.s[i], ev) < 1e-10);
        }
        for (std::size_t i = 1; i < k; ++i)
            CHECK(d.s[i - 1] >= d.s[i]);

        CHECK(test::max_abs_diff(adjoint(d.u) * d.u, CMat::identity(k)) < 1e-12);
        CHECK(test::max_abs_diff(adjoint(d.v) * d.v, CMat::identity(k)) < 1e-12);
        const CMat recon = d.u * CMat::diagonal(d.s) * adjoint(d.v);
        CHECK(test::max_abs_diff(recon, m) < 1e-12 * std::max(1.0, max_abs(m)));
    }
}

TEST_CASE("SVD of rank-deficient input keeps orthonormal factors", "[numerics]")
{
    Rng rng{16};
    const CMat x = random_cmat(3, 1, rng);
    const CMat y = random_cmat(1, 4, rng);
    const Svd d = svd(x * y);
    CHECK(d.s[1] < 1e-12 * d.s[0]);
    CHECK(d.s[2] < 1e-12 * d.s[0]);
    CHECK(test::max_abs_diff(adjoint(d.u) * d.u, CMat::identity(3)) < 1e-12);

    const Svd z = svd(CMat(2, 3));
    CHECK(z.s == std::vector<double>{0.0, 0.0});
    CHECK(test::max_abs_diff(adjoint(z.u) * z.u, CMat::identity(2)) < 1e-12);
}

TEST_CASE("non-finite input to the SVD is a numeric error", "[numerics]")
{
    CMat m(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(m), NumericError);
}
