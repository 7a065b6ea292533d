// AVX2+FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; the dispatcher only hands out this table after a cpuid
// check, so no AVX instruction can execute on unsupported hardware.
#include "entkit/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace entkit::kernels {

namespace {

// Complex product against interleaved [re,im,re,im] lanes:
// (ar+i*ai)(br+i*bi) = (ar*br - ai*bi) + i(ar*bi + ai*br).
// fmaddsub computes ar*b -/+ ai*swap(b) lanewise, which is exactly that.
inline __m256d cmul_acc(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
    __m256d bsw = _mm256_permute_pd(b, 0x5);  // [im,re,im,re]
    __m256d prod = _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bsw));
    return _mm256_add_pd(acc, prod);
}

void matmul_avx2(const cx* a, const cx* b, cx* c, std::size_t m, std::size_t k, std::size_t n) {
    double* cd = reinterpret_cast<double*>(c);
    const double* bd = reinterpret_cast<const double*>(b);
    for (std::size_t i = 0; i < m * n; ++i) c[i] = cx{0.0, 0.0};
    const std::size_t nvec = n / 2 * 2;  // two complex numbers per 256-bit lane
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const cx aval = a[i * k + l];
            if (aval.real() == 0.0 && aval.imag() == 0.0) continue;
            const __m256d ar = _mm256_set1_pd(aval.real());
            const __m256d ai = _mm256_set1_pd(aval.imag());
            const double* brow = bd + 2 * l * n;
            double* crow = cd + 2 * i * n;
            std::size_t j = 0;
            for (; j < nvec; j += 2) {
                __m256d bv = _mm256_loadu_pd(brow + 2 * j);
                __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                _mm256_storeu_pd(crow + 2 * j, cmul_acc(cv, ar, ai, bv));
            }
            for (; j < n; ++j) c[i * n + j] += aval * b[l * n + j];
        }
    }
}

double frob_sq_avx2(const cx* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const std::size_t total = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= total; i += 4) {
        __m256d v = _mm256_loadu_pd(xd + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < total; ++i) s += xd[i] * xd[i];
    return s;
}

void axpy_avx2(cx alpha, const cx* x, cx* y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const std::size_t nvec = n / 2 * 2;
    std::size_t j = 0;
    for (; j < nvec; j += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * j);
        __m256d yv = _mm256_loadu_pd(yd + 2 * j);
        _mm256_storeu_pd(yd + 2 * j, cmul_acc(yv, ar, ai, xv));
    }
    for (; j < n; ++j) y[j] += alpha * x[j];
}

}  // namespace

const Table* avx2_table() {
    static const Table t{"avx2", matmul_avx2, frob_sq_avx2, axpy_avx2};
    return &t;
}

}  // namespace entkit::kernels

#else

namespace entkit::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace entkit::kernels

#endif
