#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace entkit {

using cx = std::complex<double>;

// Thrown on contract violations: bad dimensions, invalid parameters,
// non-physical inputs. CLI maps it to exit code 2.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

namespace tol {
// Shared numeric tolerances. Hermiticity/PSD admission, eigensolver
// reconstruction, and rank cutoffs use fixed absolute values; callers that
// need looser Monte-Carlo tolerances pass their own.
inline constexpr double hermitian = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double unit_norm = 1e-12;
inline constexpr double eig_reconstruct = 1e-9;
inline constexpr double schmidt_rank = 1e-10;  // threshold on squared coefficients
inline constexpr double gate = 1e-9;           // biseparability gate on reduced functions
inline constexpr double heron_clamp = -1e-12;  // most negative admissible radicand
}  // namespace tol

}  // namespace entkit
