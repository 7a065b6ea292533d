#pragma once

#include <cstddef>
#include <vector>

#include "entkit/common.hpp"

namespace entkit {

// Dense row-major complex matrix. Deliberately small: quantum states at desk
// scale stay below dimension 64, so no blocking or storage tricks are needed;
// the kernel layer supplies the vectorized inner loops.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cx{0.0, 0.0}) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> data);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    cx& at(std::size_t i, std::size_t j);
    const cx& at(std::size_t i, std::size_t j) const;

    const std::vector<cx>& data() const { return data_; }
    std::vector<cx>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    cx trace() const;
    double frobenius_norm() const;

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;  // kernel matmul
    ComplexMatrix operator*(cx s) const;
    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cx s);

    std::vector<cx> apply(const std::vector<cx>& v) const;  // matrix * column vector

    bool is_hermitian(double tolerance = tol::hermitian) const;
    double max_abs_diff(const ComplexMatrix& o) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cx> data_;
};

}  // namespace entkit
