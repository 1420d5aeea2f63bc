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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hris
{

using cplx = std::complex<double>;

// ---- Errors -------------------------------------------------------------

struct NumericError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : NumericError
{
    using NumericError::NumericError;
};

struct NotHermitian : NumericError
{
    using NumericError::NumericError;
};

struct NotPositiveDefinite : NumericError
{
    using NumericError::NumericError;
};

struct ConvergenceFailure : NumericError
{
    ConvergenceFailure(const std::string &what, std::size_t iteration_cap)
        : NumericError(what), cap(iteration_cap) {}
    std::size_t cap;
};

// ---- Dense complex matrix -----------------------------------------------

// Dense complex matrix, row-major storage.
class CMat
{
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols, cplx fill = {0.0, 0.0})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    // Row-major nested initializer, e.g. CMat{{1, 2}, {3, 4}}.
    CMat(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMat identity(std::size_t n);
    static CMat diagonal(std::span<const cplx> d);
    static CMat diagonal(std::span<const double> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool is_square() const { return rows_ == cols_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    CMat col(std::size_t c) const;
    CMat row(std::size_t r) const;

    bool operator==(const CMat &other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMat matmul(const CMat &a, const CMat &b);
CMat add(const CMat &a, const CMat &b);
CMat sub(const CMat &a, const CMat &b);
CMat scale(const CMat &a, cplx s);
CMat adjoint(const CMat &a);

inline CMat operator*(const CMat &a, const CMat &b) { return matmul(a, b); }
inline CMat operator+(const CMat &a, const CMat &b) { return add(a, b); }
inline CMat operator-(const CMat &a, const CMat &b) { return sub(a, b); }
inline CMat operator*(cplx s, const CMat &a) { return scale(a, s); }

double frobenius_norm_sq(const CMat &a);
double frobenius_norm(const CMat &a);
double max_abs(const CMat &a);
bool all_finite(const CMat &a);

// Column-major vec(Re(m)) followed by column-major vec(Im(m)).
std::vector<double> vectorize_reim(const CMat &m);

// Inverse of vectorize_reim; `v` must have length 2*rows*cols.
CMat devectorize_reim(std::span<const double> v, std::size_t rows, std::size_t cols);

// ---- Hermitian positive-definite kernels --------------------------------

// Relative tolerance used by the Hermitian check.
inline constexpr double hermitian_rel_tol = 1e-9;

// Throws NotHermitian unless m is square and max|m - m^H| <= 1e-9 * max|m|.
void require_hermitian(const CMat &m);

// Lower Cholesky factor L with m = L L^H. Throws NotPositiveDefinite on a
// non-positive pivot.
CMat cholesky(const CMat &m);

// ln det(m) = 2 * sum ln L_ii.
double hermitian_logdet(const CMat &m);

// m^{-1} by Cholesky solve, symmetrised so the result is exactly Hermitian.
CMat hermitian_inverse(const CMat &m);

// Solves L X = B for lower-triangular L.
CMat forward_substitute(const CMat &lower, const CMat &b);

// ---- SVD ------------------------------------------------------------------

struct Svd
{
    CMat u;                 // rows x k, orthonormal columns
    std::vector<double> s;  // k = min(rows, cols), descending
    CMat v;                 // cols x k, orthonormal columns
    std::size_t sweeps = 0;
};

// Thin SVD m = U diag(s) V^H via one-sided (Hestenes) Jacobi. The sweep cap
// is 100 * max(rows, cols); exceeding it throws ConvergenceFailure.
Svd svd(const CMat &m);

} // namespace hris
