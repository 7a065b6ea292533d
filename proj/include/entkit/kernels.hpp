#pragma once

#include <cstddef>

#include "entkit/common.hpp"

namespace entkit::kernels {

// Hot inner loops on interleaved complex-double buffers. Scalar reference
// implementations always exist; AVX2 (x86_64) or NEON (aarch64) variants are
// picked once at runtime when the CPU supports them. Variants must agree with
// the scalar versions to ~1 ulp-scale accumulation differences; the
// equivalence test pins that down.
struct Table {
    const char* name;
    // c[m*n] = a[m*k] * b[k*n], row-major complex, c overwritten
    void (*matmul)(const cx* a, const cx* b, cx* c, std::size_t m, std::size_t k, std::size_t n);
    // sum of |x_i|^2
    double (*frob_sq)(const cx* x, std::size_t n);
    // y += alpha * x
    void (*axpy)(cx alpha, const cx* x, cx* y, std::size_t n);
};

const Table& scalar();
const Table& active();  // runtime-selected; falls back to scalar

}  // namespace entkit::kernels
