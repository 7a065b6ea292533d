// NEON kernel variants for aarch64. One complex double per 128-bit lane.
#include "entkit/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace entkit::kernels {

namespace {

// prod = [ar*br - ai*bi, ar*bi + ai*br] built from b=[br,bi] and bsw=[bi,br].
inline float64x2_t cmul_acc(float64x2_t acc, double ar, double ai, float64x2_t b) {
    const float64x2_t sign = {-1.0, 1.0};
    float64x2_t t = vmulq_n_f64(b, ar);
    float64x2_t bsw = vextq_f64(b, b, 1);
    t = vfmaq_f64(t, vmulq_n_f64(bsw, ai), sign);
    return vaddq_f64(acc, t);
}

void matmul_neon(const cx* a, const cx* b, cx* c, std::size_t m, std::size_t k, std::size_t n) {
    double* cd = reinterpret_cast<double*>(c);
    const double* bd = reinterpret_cast<const double*>(b);
    for (std::size_t i = 0; i < m * n; ++i) c[i] = cx{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const cx aval = a[i * k + l];
            if (aval.real() == 0.0 && aval.imag() == 0.0) continue;
            const double* brow = bd + 2 * l * n;
            double* crow = cd + 2 * i * n;
            for (std::size_t j = 0; j < n; ++j) {
                float64x2_t bv = vld1q_f64(brow + 2 * j);
                float64x2_t cv = vld1q_f64(crow + 2 * j);
                vst1q_f64(crow + 2 * j, cmul_acc(cv, aval.real(), aval.imag(), bv));
            }
        }
    }
}

double frob_sq_neon(const cx* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t v = vld1q_f64(xd + 2 * i);
        acc = vfmaq_f64(acc, v, v);
    }
    return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

void axpy_neon(cx alpha, const cx* x, cx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    for (std::size_t j = 0; j < n; ++j) {
        float64x2_t xv = vld1q_f64(xd + 2 * j);
        float64x2_t yv = vld1q_f64(yd + 2 * j);
        vst1q_f64(yd + 2 * j, cmul_acc(yv, alpha.real(), alpha.imag(), xv));
    }
}

}  // namespace

const Table* neon_table() {
    static const Table t{"neon", matmul_neon, frob_sq_neon, axpy_neon};
    return &t;
}

}  // namespace entkit::kernels

#else

namespace entkit::kernels {
const Table* neon_table() { return nullptr; }
}  // namespace entkit::kernels

#endif
