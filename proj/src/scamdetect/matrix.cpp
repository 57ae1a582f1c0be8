// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/matrix.hpp"
#include "scamdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scamdetect
{
namespace
{
[[noreturn]] void mismatch(const char* what, const DenseMatrix& a, const DenseMatrix& b)
{
    throw Error{ErrorCode::DimensionMismatch,
        std::string{what} + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
            " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols())};
}
}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
  : rows_{rows}, cols_{cols}, data_{std::move(data)}
{
    if (data_.size() != rows_ * cols_)
        throw Error{ErrorCode::DimensionMismatch, "matrix data length does not match shape"};
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m{n, n};
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other)
{
    require_same_shape(*this, other, "add");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept
{
    for (auto& v : data_)
        v *= s;
    return *this;
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        mismatch(what, a, b);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows())
        mismatch("matmul", a, b);
    DenseMatrix out{a.rows(), b.cols()};
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        auto orow = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const double s = a(i, k);
            if (s == 0.0)
                continue;
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] += s * brow[j];
        }
    }
    return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows())
        mismatch("matmul_tn", a, b);
    DenseMatrix out{a.cols(), b.cols()};
    for (std::size_t k = 0; k < a.rows(); ++k)
    {
        const auto arow = a.row(k);
        const auto brow = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i)
        {
            const double s = arow[i];
            if (s == 0.0)
                continue;
            auto orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] += s * brow[j];
        }
    }
    return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.cols())
        mismatch("matmul_nt", a, b);
    DenseMatrix out{a.rows(), b.rows()};
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        const auto arow = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j)
        {
            const auto brow = b.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc += arow[k] * brow[k];
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix relu(const DenseMatrix& m)
{
    DenseMatrix out = m;
    for (auto& v : out.data())
        v = v > 0.0 ? v : 0.0;
    return out;
}

void relu_backward_inplace(DenseMatrix& grad, const DenseMatrix& pre)
{
    require_same_shape(grad, pre, "relu_backward");
    auto& g = grad.data();
    const auto& p = pre.data();
    for (std::size_t i = 0; i < g.size(); ++i)
        if (p[i] <= 0.0)
            g[i] = 0.0;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b)
{
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace scamdetect
