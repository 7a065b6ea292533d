#include "entkit/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "entkit/kernels.hpp"

namespace entkit {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw validation_error("matrix data size does not match rows*cols");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cx{1.0, 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = cx{d[i], 0.0};
    return m;
}

cx& ComplexMatrix::at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) throw validation_error("matrix index out of range");
    return data_[i * cols_ + j];
}

const cx& ComplexMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw validation_error("matrix index out of range");
    return data_[i * cols_ + j];
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = std::conj(data_[i]);
    return m;
}

cx ComplexMatrix::trace() const {
    if (!square()) throw validation_error("trace requires a square matrix");
    cx t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(kernels::active().frob_sq(data_.data(), data_.size()));
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    ComplexMatrix r = *this;
    r += o;
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    ComplexMatrix r = *this;
    r -= o;
    return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw validation_error("matrix shape mismatch in +");
    kernels::active().axpy(cx{1.0, 0.0}, o.data_.data(), data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw validation_error("matrix shape mismatch in -");
    kernels::active().axpy(cx{-1.0, 0.0}, o.data_.data(), data_.data(), data_.size());
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw validation_error("matrix shape mismatch in *");
    ComplexMatrix r(rows_, o.cols_);
    kernels::active().matmul(data_.data(), o.data_.data(), r.data_.data(), rows_, cols_, o.cols_);
    return r;
}

ComplexMatrix ComplexMatrix::operator*(cx s) const {
    ComplexMatrix r(rows_, cols_);
    kernels::active().axpy(s, data_.data(), r.data_.data(), data_.size());
    return r;
}

ComplexMatrix& ComplexMatrix::operator*=(cx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

std::vector<cx> ComplexMatrix::apply(const std::vector<cx>& v) const {
    if (v.size() != cols_) throw validation_error("vector length mismatch in matrix apply");
    std::vector<cx> out(rows_, cx{0.0, 0.0});
    kernels::active().matmul(data_.data(), v.data(), out.data(), rows_, cols_, 1);
    return out;
}

bool ComplexMatrix::is_hermitian(double tolerance) const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tolerance) return false;
    return true;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw validation_error("matrix shape mismatch in diff");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - o.data_[i]));
    return m;
}

}  // namespace entkit
