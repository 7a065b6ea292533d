#include "entkit/kernels.hpp"

namespace entkit::kernels {

namespace {

void matmul_scalar(const cx* a, const cx* b, cx* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m * n; ++i) c[i] = cx{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const cx aval = a[i * k + l];
            if (aval.real() == 0.0 && aval.imag() == 0.0) continue;
            const cx* brow = b + l * n;
            cx* crow = c + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
        }
    }
}

double frob_sq_scalar(const cx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void axpy_scalar(cx alpha, const cx* x, cx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Table& scalar() {
    static const Table t{"scalar", matmul_scalar, frob_sq_scalar, axpy_scalar};
    return t;
}

}  // namespace entkit::kernels
