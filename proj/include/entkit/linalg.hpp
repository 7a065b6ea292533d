#pragma once

#include <vector>

#include "entkit/complex_matrix.hpp"

namespace entkit {

// Eigenvalues in descending order; eigenvectors are the matching orthonormal
// columns. Reconstruction V diag(w) V^dag reproduces the input to 1e-9
// relative; V^dag V = I to 1e-10.
struct EigenSystem {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

// m = u * diag(s) * v^dag with s descending, u and v isometries onto the
// leading min(rows,cols) columns.
struct SvdResult {
    ComplexMatrix u;
    std::vector<double> singular_values;
    ComplexMatrix v;
};

// Cyclic Jacobi on the real-symmetric embedding [[X,-Y],[Y,X]] of m = X+iY.
// Rejects non-square or non-hermitian input. Intended for dimensions up to 64
// (the embedding doubles that internally).
EigenSystem hermitian_eig(const ComplexMatrix& m);

// Via the hermitian embedding [[0,m],[m^dag,0]], whose spectrum is +/- the
// singular values; this keeps tiny singular values at full precision instead
// of square-rooting eigenvalues of m^dag m.
SvdResult svd(const ComplexMatrix& m);

// Sum of singular values. Hermitian inputs take the direct eigenvalue path.
double trace_norm(const ComplexMatrix& m);

// Spectral power of a PSD hermitian matrix. Eigenvalues in [-1e-10, 0) are
// clipped to 0; more negative ones reject the input. 0^p := 0 for p > 0;
// p < 0 rejects singular input; p = 0 yields the support projector.
ComplexMatrix matrix_power(const ComplexMatrix& m, double p);

ComplexMatrix matrix_sqrt(const ComplexMatrix& m);  // matrix_power(m, 0.5)

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const std::vector<ComplexMatrix>& factors);

// Eigenvalues only (descending); same validation as hermitian_eig.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace entkit
