// chartkit: digital-twin-aided channel charting toolkit
// Copyright (C) 2026 The chartkit authors
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

#include <cblas.h>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chartkit {

// Dense row-major real matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    double* row(std::size_t i) { return a.data() + i * cols; }
    const double* row(std::size_t i) const { return a.data() + i * cols; }
    std::size_t size() const { return a.size(); }
};

// Dense row-major complex matrix (CSI blocks, DFT matrices).
struct CMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::complex<double>> a;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    std::complex<double>& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
        return a[i * cols + j];
    }
    std::size_t size() const { return a.size(); }

    double frob_sq() const {
        double s = 0.0;
        for (const auto& z : a)
            s += std::norm(z);
        return s;
    }

    bool is_zero() const {
        for (const auto& z : a)
            if (z != std::complex<double>(0.0, 0.0))
                return false;
        return true;
    }
};

inline void blas_set_threads(int n) { openblas_set_num_threads(n); }

// C = alpha * op(A) * op(B) + beta * C
inline void gemm(bool trans_a, bool trans_b, double alpha, const Matrix& A, const Matrix& B,
                 double beta, Matrix& C) {
    const std::size_t am = trans_a ? A.cols : A.rows;
    const std::size_t ak = trans_a ? A.rows : A.cols;
    const std::size_t bk = trans_b ? B.cols : B.rows;
    const std::size_t bn = trans_b ? B.rows : B.cols;
    if (ak != bk || C.rows != am || C.cols != bn)
        throw std::invalid_argument("gemm: dimension mismatch");
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, (blasint)am, (blasint)bn, (blasint)ak, alpha,
                A.a.data(), (blasint)A.cols, B.a.data(), (blasint)B.cols, beta, C.a.data(),
                (blasint)C.cols);
}

// y = M * x for a row-major matrix and dense vectors.
inline std::vector<double> matvec(const Matrix& M, const std::vector<double>& x) {
    if (M.cols != x.size())
        throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(M.rows, 0.0);
    for (std::size_t i = 0; i < M.rows; ++i) {
        const double* r = M.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols; ++j)
            s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

// y = M^T * x.
inline std::vector<double> matvec_t(const Matrix& M, const std::vector<double>& x) {
    if (M.rows != x.size())
        throw std::invalid_argument("matvec_t: dimension mismatch");
    std::vector<double> y(M.cols, 0.0);
    for (std::size_t i = 0; i < M.rows; ++i) {
        const double* r = M.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < M.cols; ++j)
            y[j] += r[j] * xi;
    }
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm_sq(const std::vector<double>& a) { return dot(a, a); }

} // namespace chartkit
