#include "entkit/kernels.hpp"

namespace entkit::kernels {

const Table* avx2_table();
const Table* neon_table();

namespace {

const Table* select() {
#if defined(ENTKIT_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        if (const Table* t = avx2_table()) return t;
    }
#endif
#if defined(ENTKIT_BUILD_NEON) && defined(__aarch64__)
    if (const Table* t = neon_table()) return t;
#endif
    return &scalar();
}

}  // namespace

const Table& active() {
    static const Table* chosen = select();
    return *chosen;
}

}  // namespace entkit::kernels
