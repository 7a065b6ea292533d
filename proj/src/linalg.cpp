#include "entkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entkit {

namespace {

constexpr std::size_t kMaxEmbeddedDim = 256;  // real-symmetric working size cap

// Plain real symmetric matrix, row-major, for the Jacobi working copy.
struct RealSym {
    std::size_t n;
    std::vector<double> a;
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

double off_norm(const RealSym& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = i + 1; j < s.n; ++j) sum += 2.0 * s.at(i, j) * s.at(i, j);
    return std::sqrt(sum);
}

// Cyclic Jacobi with accumulated rotations. v's columns end up as the
// eigenvectors of s; s's diagonal as the eigenvalues.
void jacobi(RealSym& s, std::vector<double>& v) {
    const std::size_t n = s.n;
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(s.at(i, j)));
    if (scale == 0.0) return;
    const double stop = 1e-15 * scale * static_cast<double>(n);
    for (int sweep = 0; sweep < 64; ++sweep) {
        if (off_norm(s) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s.at(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (s.at(q, q) - s.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s.at(k, p), skq = s.at(k, q);
                    s.at(k, p) = c * skp - sn * skq;
                    s.at(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s.at(p, k), sqk = s.at(q, k);
                    s.at(p, k) = c * spk - sn * sqk;
                    s.at(q, k) = sn * spk + c * sqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + c * vkq;
                }
            }
        }
    }
}

struct RealEig {
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // column k of the n x n array matches values[k]
    std::size_t n;
};

RealEig real_sym_eig(RealSym s) {
    std::vector<double> v;
    jacobi(s, v);
    const std::size_t n = s.n;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return s.at(i, i) > s.at(j, j);
    });
    RealEig out;
    out.n = n;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = s.at(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
    }
    return out;
}

// The embedding doubles every complex eigenvector: (x;y) and (-y;x) both map
// to the same complex direction (z and iz). Pivoted Gram-Schmidt over the
// complex images keeps one representative per direction; pivoting on the
// largest residual makes the selection robust inside degenerate clusters.
EigenSystem complex_from_embedding(const RealEig& re, std::size_t n) {
    struct Cand {
        double value;
        std::vector<cx> z;
    };
    std::vector<Cand> cands(re.n);
    for (std::size_t k = 0; k < re.n; ++k) {
        cands[k].value = re.values[k];
        cands[k].z.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            cands[k].z[i] = cx{re.vectors[i * re.n + k], re.vectors[(i + n) * re.n + k]};
    }
    EigenSystem out;
    out.eigenvectors = ComplexMatrix(n, n);
    out.eigenvalues.reserve(n);
    std::vector<bool> used(cands.size(), false);
    std::vector<double> res_sq(cands.size());
    for (std::size_t k = 0; k < cands.size(); ++k) {
        double s = 0.0;
        for (const cx& zi : cands[k].z) s += std::norm(zi);
        res_sq[k] = s;
    }
    for (std::size_t pick = 0; pick < n; ++pick) {
        std::size_t best = cands.size();
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (used[k]) continue;
            if (best == cands.size() || res_sq[k] > res_sq[best] + 1e-15) best = k;
        }
        if (best == cands.size() || res_sq[best] <= 1e-12)
            throw std::runtime_error("eigenvector extraction failed to span the space");
        used[best] = true;
        // Re-orthogonalize the chosen candidate explicitly for accuracy.
        std::vector<cx> z = cands[best].z;
        for (std::size_t prev = 0; prev < pick; ++prev) {
            cx dot{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                dot += std::conj(out.eigenvectors(i, prev)) * z[i];
            for (std::size_t i = 0; i < n; ++i) z[i] -= dot * out.eigenvectors(i, prev);
        }
        double norm_sq = 0.0;
        for (const cx& zi : z) norm_sq += std::norm(zi);
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, pick) = z[i] * inv;
        out.eigenvalues.push_back(cands[best].value);
        // Shrink the residuals of the remaining candidates.
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (used[k]) continue;
            cx dot{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                dot += std::conj(out.eigenvectors(i, pick)) * cands[k].z[i];
            for (std::size_t i = 0; i < n; ++i) cands[k].z[i] -= dot * out.eigenvectors(i, pick);
            res_sq[k] -= std::norm(dot);
        }
    }
    // The pivot may pick inside near-degenerate clusters out of order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return out.eigenvalues[i] > out.eigenvalues[j];
    });
    EigenSystem sorted;
    sorted.eigenvectors = ComplexMatrix(n, n);
    sorted.eigenvalues.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted.eigenvalues[k] = out.eigenvalues[order[k]];
        for (std::size_t i = 0; i < n; ++i)
            sorted.eigenvectors(i, k) = out.eigenvectors(i, order[k]);
    }
    return sorted;
}

RealSym embed_hermitian(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    RealSym s{2 * n, std::vector<double>(4 * n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = m(i, j).real();
            const double y = m(i, j).imag();
            s.at(i, j) = x;
            s.at(i + n, j + n) = x;
            s.at(i, j + n) = -y;
            s.at(i + n, j) = y;
        }
    }
    return s;
}

// Deterministic completion of an orthonormal column set to `want` columns.
void complete_columns(ComplexMatrix& u, std::size_t have, std::size_t want) {
    const std::size_t dim = u.rows();
    for (std::size_t col = have; col < want; ++col) {
        std::vector<cx> best;
        double best_norm = -1.0;
        for (std::size_t e = 0; e < dim; ++e) {
            std::vector<cx> cand(dim, cx{0.0, 0.0});
            cand[e] = cx{1.0, 0.0};
            for (std::size_t prev = 0; prev < col; ++prev) {
                cx dot{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i) dot += std::conj(u(i, prev)) * cand[i];
                for (std::size_t i = 0; i < dim; ++i) cand[i] -= dot * u(i, prev);
            }
            double norm_sq = 0.0;
            for (const cx& z : cand) norm_sq += std::norm(z);
            if (norm_sq > best_norm + 1e-15) {
                best_norm = norm_sq;
                best = std::move(cand);
            }
        }
        const double inv = 1.0 / std::sqrt(best_norm);
        for (std::size_t i = 0; i < dim; ++i) u(i, col) = best[i] * inv;
    }
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& m) {
    if (!m.square()) throw validation_error("hermitian_eig requires a square matrix");
    if (!m.is_hermitian()) throw validation_error("hermitian_eig requires a hermitian matrix");
    if (2 * m.rows() > kMaxEmbeddedDim)
        throw validation_error("hermitian_eig dimension exceeds supported range");
    if (m.rows() == 0) return {{}, ComplexMatrix(0, 0)};
    RealEig re = real_sym_eig(embed_hermitian(m));
    return complex_from_embedding(re, m.rows());
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (!m.square()) throw validation_error("hermitian_eig requires a square matrix");
    if (!m.is_hermitian()) throw validation_error("hermitian_eig requires a hermitian matrix");
    if (2 * m.rows() > kMaxEmbeddedDim)
        throw validation_error("hermitian_eig dimension exceeds supported range");
    RealEig re = real_sym_eig(embed_hermitian(m));
    // Embedded eigenvalues come in duplicated pairs; take every other one.
    std::vector<double> vals;
    vals.reserve(m.rows());
    for (std::size_t k = 0; k < re.values.size(); k += 2) vals.push_back(re.values[k]);
    return vals;
}

SvdResult svd(const ComplexMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const std::size_t r = std::min(rows, cols);
    if (r == 0) return {ComplexMatrix(rows, 0), {}, ComplexMatrix(cols, 0)};
    // Hermitian embedding [[0, m], [m^dag, 0]]: eigenvalues are +sigma,
    // (zeros), -sigma; eigenvectors carry (u; v) pairs with shared phase.
    const std::size_t dim = rows + cols;
    ComplexMatrix h(dim, dim);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            h(i, rows + j) = m(i, j);
            h(rows + j, i) = std::conj(m(i, j));
        }
    EigenSystem es = hermitian_eig(h);
    SvdResult out;
    out.u = ComplexMatrix(rows, r);
    out.v = ComplexMatrix(cols, r);
    out.singular_values.assign(r, 0.0);
    const double sigma_max = std::max(es.eigenvalues.empty() ? 0.0 : es.eigenvalues.front(), 0.0);
    const double cutoff = sigma_max * 1e-12;
    std::size_t have = 0;
    for (std::size_t k = 0; k < es.eigenvalues.size() && have < r; ++k) {
        const double sigma = es.eigenvalues[k];
        if (sigma <= cutoff) break;  // descending order: done with the + branch
        double un = 0.0, vn = 0.0;
        for (std::size_t i = 0; i < rows; ++i) un += std::norm(es.eigenvectors(i, k));
        for (std::size_t j = 0; j < cols; ++j) vn += std::norm(es.eigenvectors(rows + j, k));
        un = std::sqrt(un);
        vn = std::sqrt(vn);
        if (un <= 1e-150 || vn <= 1e-150) continue;
        for (std::size_t i = 0; i < rows; ++i) out.u(i, have) = es.eigenvectors(i, k) / un;
        for (std::size_t j = 0; j < cols; ++j) out.v(j, have) = es.eigenvectors(rows + j, k) / vn;
        out.singular_values[have] = sigma;
        ++have;
    }
    complete_columns(out.u, have, r);
    complete_columns(out.v, have, r);
    return out;
}

double trace_norm(const ComplexMatrix& m) {
    if (m.square() && m.is_hermitian()) {
        double s = 0.0;
        for (double w : hermitian_eigenvalues(m)) s += std::abs(w);
        return s;
    }
    const SvdResult sv = svd(m);
    double s = 0.0;
    for (double w : sv.singular_values) s += w;
    return s;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, double p) {
    EigenSystem es = hermitian_eig(m);
    const std::size_t n = m.rows();
    std::vector<double> w = es.eigenvalues;
    for (double& x : w) {
        if (x < 0.0) {
            if (x < -tol::psd) throw validation_error("matrix_power requires a PSD matrix");
            x = 0.0;
        }
    }
    if (p < 0.0) {
        for (double x : w)
            if (x == 0.0) throw validation_error("matrix_power with negative exponent requires a nonsingular matrix");
    }
    std::vector<double> powered(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] == 0.0)
            powered[i] = 0.0;  // 0^p := 0 (p > 0); p == 0 keeps the support projector
        else
            powered[i] = std::pow(w[i], p);
    }
    ComplexMatrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) scaled(i, k) = es.eigenvectors(i, k) * powered[k];
    ComplexMatrix result = scaled * es.eigenvectors.adjoint();
    // Symmetrize away rotation roundoff.
    ComplexMatrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sym(i, j) = (result(i, j) + std::conj(result(j, i))) * 0.5;
    return sym;
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& m) { return matrix_power(m, 0.5); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cx aij = a(i, j);
            if (aij == cx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix kron(const std::vector<ComplexMatrix>& factors) {
    if (factors.empty()) throw validation_error("kron requires at least one factor");
    ComplexMatrix acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i]);
    return acc;
}

}  // namespace entkit
