// matrix.hpp
// Dense complex matrices at small dimension, row-major storage.

#pragma once

#include <cstddef>
#include <utility>

#include "qkd/common.hpp"

namespace qkd {

inline constexpr double kHermTol = 1e-10;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    complex trace() const {
        complex t{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix dagger() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    double max_abs_violation_hermitian() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return worst;
    }

    bool is_hermitian(double tol = kHermTol) const {
        return rows_ == cols_ && max_abs_violation_hermitian() <= tol;
    }

    cvec column(std::size_t j) const {
        cvec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_column(std::size_t j, const cvec& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    friend ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
        if (x.cols_ != y.rows_) throw domain_error("matrix product: dimension mismatch");
        ComplexMatrix z(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const complex xv = x(i, k);
                if (xv == complex{}) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += xv * y(k, j);
            }
        return z;
    }

    friend ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw domain_error("matrix sum: dimension mismatch");
        ComplexMatrix z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] += y.a_[i];
        return z;
    }

    friend ComplexMatrix operator*(complex c, const ComplexMatrix& x) {
        ComplexMatrix z = x;
        for (auto& v : z.a_) v *= c;
        return z;
    }

    cvec apply(const cvec& v) const {
        if (cols_ != v.size()) throw domain_error("matrix apply: dimension mismatch");
        cvec out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            complex acc{0.0, 0.0};
            for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }

    double max_abs_diff(const ComplexMatrix& other) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i)
            worst = std::max(worst, std::abs(a_[i] - other.a_[i]));
        return worst;
    }

    // Largest entry deviation of U^dag * U from the identity.
    double unitarity_residual() const {
        ComplexMatrix g = dagger() * (*this);
        for (std::size_t i = 0; i < g.rows_; ++i) g(i, i) -= 1.0;
        double worst = 0.0;
        for (const auto& v : g.a_) worst = std::max(worst, std::abs(v));
        return worst;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    cvec a_;
};

// |u><v| as a matrix.
inline ComplexMatrix outer(const cvec& u, const cvec& v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

inline ComplexMatrix projector(const cvec& u) { return outer(u, u); }

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix z(x.rows() * y.rows(), x.cols() * y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            for (std::size_t k = 0; k < y.rows(); ++k)
                for (std::size_t l = 0; l < y.cols(); ++l)
                    z(i * y.rows() + k, j * y.cols() + l) = x(i, j) * y(k, l);
    return z;
}

}  // namespace qkd
