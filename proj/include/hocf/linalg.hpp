#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hocf/errors.hpp"

namespace hocf {

/// Small dense square matrix, row-major. Sized for boundary-ODE orders (n <= ~10).
struct Mat {
    std::size_t n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static Mat identity(std::size_t dim) {
        Mat m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::vector<double> mul(const std::vector<double>& v) const {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Mat mul(const Mat& b) const {
        Mat out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    /// Gauss elimination with partial pivoting. Throws NotObservable on
    /// (near-)singular input since that is the only call site that cares.
    Mat inverse() const {
        Mat lhs = *this;
        Mat rhs = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(lhs(r, col)) > std::abs(lhs(piv, col))) piv = r;
            if (std::abs(lhs(piv, col)) < 1e-13)
                throw NotObservable("matrix is singular to working precision");
            if (piv != col)
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(lhs(piv, j), lhs(col, j));
                    std::swap(rhs(piv, j), rhs(col, j));
                }
            double d = lhs(col, col);
            for (std::size_t j = 0; j < n; ++j) {
                lhs(col, j) /= d;
                rhs(col, j) /= d;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col) continue;
                double f = lhs(r, col);
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    lhs(r, j) -= f * lhs(col, j);
                    rhs(r, j) -= f * rhs(col, j);
                }
            }
        }
        return rhs;
    }
};

}  // namespace hocf
