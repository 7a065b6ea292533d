#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "entkit/complex_matrix.hpp"

namespace entkit {

// Pure-state value across a fixed da x db cut; the ket arrives normalized.
using PureValueFn = std::function<double(const std::vector<cx>&, std::size_t, std::size_t)>;

struct EnsembleMember {
    std::vector<cx> ket;
    double probability = 0.0;
    double value = 0.0;
};

// Every size-m ensemble of rho comes from an m x r isometry applied to the
// spectral decomposition (r = rank). ensemble_from_isometry realizes one;
// members with negligible probability are kept with zero kets dropped.
std::vector<EnsembleMember> ensemble_from_isometry(const ComplexMatrix& isometry,
                                                   const ComplexMatrix& rho);

struct RoofOptions {
    std::size_t members = 0;  // 0: min(r^2, 2r)
    std::size_t restarts = 20;
    std::size_t max_sweeps = 60;
    double improve_tol = 1e-12;
    std::uint64_t seed = 12345;
    const ComplexMatrix* initial_isometry = nullptr;  // optional warm start (m0 x r, m0 <= m)
};

struct RoofResult {
    double value = 0.0;
    std::string bound;  // "upper" for minimization, "lower" for maximization
    std::vector<EnsembleMember> ensemble;
    ComplexMatrix isometry;  // m x r realizing the reported ensemble
    double reconstruction_error = 0.0;
    std::size_t restarts_used = 0;
};

// Minimize / maximize the ensemble average of e over decompositions of rho.
// The reported value is the best found: an upper bound on the true roof for
// minimization, a lower bound on the assistance value for maximization.
RoofResult roof_minimize(const PureValueFn& e, const ComplexMatrix& rho, std::size_t da,
                         std::size_t db, const RoofOptions& opts = {});
RoofResult assistance_maximize(const PureValueFn& e, const ComplexMatrix& rho, std::size_t da,
                               std::size_t db, const RoofOptions& opts = {});

}  // namespace entkit
