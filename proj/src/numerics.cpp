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

#include "hris/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hris
{

namespace
{

std::string shape(const CMat &m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const CMat &a, const CMat &b, const char *op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(op) + ": " + shape(a) + " vs " + shape(b));
}

void require_square(const CMat &m, const char *op)
{
    if (!m.is_square())
        throw DimensionMismatch(std::string(op) + ": matrix is not square (" + shape(m) + ")");
}

} // namespace

// ---- CMat ---------------------------------------------------------------

CMat::CMat(std::initializer_list<std::initializer_list<cplx>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows)
    {
        if (r.size() != cols_)
            throw DimensionMismatch("CMat: ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

CMat CMat::identity(std::size_t n)
{
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMat CMat::diagonal(std::span<const cplx> d)
{
    CMat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

CMat CMat::diagonal(std::span<const double> d)
{
    CMat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

CMat CMat::col(std::size_t c) const
{
    CMat out(rows_, 1);
    for (std::size_t r = 0; r < rows_; ++r)
        out(r, 0) = (*this)(r, c);
    return out;
}

CMat CMat::row(std::size_t r) const
{
    CMat out(1, cols_);
    for (std::size_t c = 0; c < cols_; ++c)
        out(0, c) = (*this)(r, c);
    return out;
}

// ---- Elementary operations ----------------------------------------------

CMat matmul(const CMat &a, const CMat &b)
{
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul: " + shape(a) + " * " + shape(b));
    CMat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const cplx aik = a(i, k);
            if (aik == cplx{})
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

CMat add(const CMat &a, const CMat &b)
{
    require_same_shape(a, b, "add");
    CMat out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] += bd[i];
    return out;
}

CMat sub(const CMat &a, const CMat &b)
{
    require_same_shape(a, b, "sub");
    CMat out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] -= bd[i];
    return out;
}

CMat scale(const CMat &a, cplx s)
{
    CMat out = a;
    for (auto &x : out.data())
        x *= s;
    return out;
}

CMat adjoint(const CMat &a)
{
    CMat out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = std::conj(a(i, j));
    return out;
}

double frobenius_norm_sq(const CMat &a)
{
    double acc = 0.0;
    for (const auto &x : a.data())
        acc += std::norm(x);
    return acc;
}

double frobenius_norm(const CMat &a) { return std::sqrt(frobenius_norm_sq(a)); }

double max_abs(const CMat &a)
{
    double m = 0.0;
    for (const auto &x : a.data())
        m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const CMat &a)
{
    return std::all_of(a.data().begin(), a.data().end(),
                       [](const cplx &x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

std::vector<double> vectorize_reim(const CMat &m)
{
    const std::size_t n = m.size();
    std::vector<double> v(2 * n);
    std::size_t k = 0;
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r, ++k)
        {
            v[k] = m(r, c).real();
            v[n + k] = m(r, c).imag();
        }
    return v;
}

CMat devectorize_reim(std::span<const double> v, std::size_t rows, std::size_t cols)
{
    const std::size_t n = rows * cols;
    if (v.size() != 2 * n)
        throw DimensionMismatch("devectorize_reim: expected " + std::to_string(2 * n) + " entries, got " +
                                std::to_string(v.size()));
    CMat m(rows, cols);
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r, ++k)
            m(r, c) = {v[k], v[n + k]};
    return m;
}

// ---- Cholesky family ----------------------------------------------------

void require_hermitian(const CMat &m)
{
    require_square(m, "hermitian check");
    double dev = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    if (dev > hermitian_rel_tol * max_abs(m))
        throw NotHermitian("matrix deviates from Hermitian by " + std::to_string(dev));
}

CMat cholesky(const CMat &m)
{
    require_hermitian(m);
    const std::size_t n = m.rows();
    CMat l(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double d = m(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > 0.0))
            throw NotPositiveDefinite("Cholesky pivot " + std::to_string(j) + " is " + std::to_string(d));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            cplx acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k)
                acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

double hermitian_logdet(const CMat &m)
{
    const CMat l = cholesky(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i)
        acc += std::log(l(i, i).real());
    return 2.0 * acc;
}

CMat forward_substitute(const CMat &lower, const CMat &b)
{
    require_square(lower, "forward_substitute");
    if (lower.rows() != b.rows())
        throw DimensionMismatch("forward_substitute: " + shape(lower) + " vs " + shape(b));
    const std::size_t n = lower.rows();
    CMat x = b;
    for (std::size_t c = 0; c < b.cols(); ++c)
        for (std::size_t i = 0; i < n; ++i)
        {
            cplx acc = x(i, c);
            for (std::size_t k = 0; k < i; ++k)
                acc -= lower(i, k) * x(k, c);
            x(i, c) = acc / lower(i, i);
        }
    return x;
}

CMat hermitian_inverse(const CMat &m)
{
    const CMat l = cholesky(m);
    const std::size_t n = l.rows();
    // m^{-1} = L^{-H} L^{-1} = W^H W with W = L^{-1}.
    const CMat w = forward_substitute(l, CMat::identity(n));
    CMat inv = matmul(adjoint(w), w);
    for (std::size_t i = 0; i < n; ++i)
    {
        inv(i, i) = inv(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const cplx avg = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
            inv(i, j) = avg;
            inv(j, i) = std::conj(avg);
        }
    }
    return inv;
}

// ---- SVD ----------------------------------------------------------------

namespace
{

// One-sided Jacobi on the columns of a (rows >= cols). On return the columns
// of a are mutually orthogonal and v accumulates the applied rotations.
std::size_t hestenes(CMat &a, CMat &v)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t cap = 100 * std::max(m, n);
    constexpr double tol = 1e-15;

    for (std::size_t sweep = 1; sweep <= cap; ++sweep)
    {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                double alpha = 0.0;
                double beta = 0.0;
                cplx gamma{};
                for (std::size_t i = 0; i < m; ++i)
                {
                    alpha += std::norm(a(i, p));
                    beta += std::norm(a(i, q));
                    gamma += std::conj(a(i, p)) * a(i, q);
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= tol * std::sqrt(alpha * beta))
                    continue;
                rotated = true;

                // Diagonalise the 2x2 Gram block [[alpha, gamma], [conj(gamma), beta]].
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const cplx ph = std::conj(gamma) / g; // e^{-j arg(gamma)}

                for (std::size_t i = 0; i < m; ++i)
                {
                    const cplx ap = a(i, p);
                    const cplx aq = ph * a(i, q);
                    a(i, p) = c * ap - s * aq;
                    a(i, q) = s * ap + c * aq;
                }
                for (std::size_t i = 0; i < v.rows(); ++i)
                {
                    const cplx vp = v(i, p);
                    const cplx vq = ph * v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        if (!rotated)
            return sweep;
    }
    throw ConvergenceFailure("svd: one-sided Jacobi did not converge within " + std::to_string(cap) + " sweeps",
                             cap);
}

// Replaces zero columns of u (flagged in `missing`) with unit vectors
// orthogonal to every other column.
void complete_orthonormal(CMat &u, const std::vector<bool> &missing)
{
    const std::size_t m = u.rows();
    std::size_t basis = 0;
    for (std::size_t c = 0; c < u.cols(); ++c)
    {
        if (!missing[c])
            continue;
        for (; basis < m; ++basis)
        {
            CMat cand(m, 1);
            cand(basis, 0) = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t o = 0; o < u.cols(); ++o)
                {
                    if (o == c || (missing[o] && o > c))
                        continue;
                    cplx proj{};
                    for (std::size_t i = 0; i < m; ++i)
                        proj += std::conj(u(i, o)) * cand(i, 0);
                    for (std::size_t i = 0; i < m; ++i)
                        cand(i, 0) -= proj * u(i, o);
                }
            const double nrm = frobenius_norm(cand);
            if (nrm > 1e-6)
            {
                for (std::size_t i = 0; i < m; ++i)
                    u(i, c) = cand(i, 0) / nrm;
                ++basis;
                break;
            }
        }
    }
}

Svd svd_tall(const CMat &m)
{
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    CMat a = m;
    CMat v = CMat::identity(cols);
    const std::size_t sweeps = hestenes(a, v);

    std::vector<double> norms(cols);
    for (std::size_t c = 0; c < cols; ++c)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            acc += std::norm(a(i, c));
        norms[c] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    Svd out;
    out.sweeps = sweeps;
    out.u = CMat(rows, cols);
    out.v = CMat(cols, cols);
    out.s.resize(cols);
    const double smax = norms.empty() ? 0.0 : norms[order[0]];
    std::vector<bool> missing(cols, false);
    for (std::size_t k = 0; k < cols; ++k)
    {
        const std::size_t c = order[k];
        out.s[k] = norms[c];
        for (std::size_t i = 0; i < cols; ++i)
            out.v(i, k) = v(i, c);
        if (norms[c] <= 1e-13 * smax || norms[c] == 0.0)
        {
            missing[k] = true;
            continue;
        }
        for (std::size_t i = 0; i < rows; ++i)
            out.u(i, k) = a(i, c) / norms[c];
    }
    if (std::find(missing.begin(), missing.end(), true) != missing.end())
        complete_orthonormal(out.u, missing);
    return out;
}

} // namespace

Svd svd(const CMat &m)
{
    if (!all_finite(m))
        throw NumericError("svd: non-finite input");
    if (m.rows() >= m.cols())
        return svd_tall(m);
    // m^H = U' S V'^H  =>  m = V' S U'^H
    Svd t = svd_tall(adjoint(m));
    std::swap(t.u, t.v);
    return t;
}

} // namespace hris
