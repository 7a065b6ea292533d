#include "entkit/convex_roof.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "entkit/common.hpp"
#include "entkit/linalg.hpp"
#include "entkit/rng.hpp"

namespace entkit {
namespace {

constexpr double kRankCut = 1e-12;
constexpr double kProbCut = 1e-14;

struct SpectralBasis {
    std::size_t dim = 0;
    std::size_t rank = 0;
    std::vector<double> sqrt_lambda;  // descending
    ComplexMatrix vectors{0, 0};      // dim x rank eigenvector columns
};

SpectralBasis spectral_basis(const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols()) throw validation_error("convex roof needs a square density matrix");
    if (!rho.is_hermitian()) throw validation_error("convex roof input is not hermitian");
    const EigenSystem eig = hermitian_eig(rho);
    double trace = 0.0;
    for (double v : eig.eigenvalues) {
        if (v < -tol::psd) throw validation_error("convex roof input has a negative eigenvalue");
        trace += v;
    }
    if (std::abs(trace - 1.0) > 1e-8) throw validation_error("convex roof input trace is not 1");
    SpectralBasis basis;
    basis.dim = rho.rows();
    for (double v : eig.eigenvalues) {
        if (v > kRankCut) ++basis.rank;
    }
    if (basis.rank == 0) throw validation_error("convex roof input has numerical rank zero");
    basis.sqrt_lambda.resize(basis.rank);
    basis.vectors = ComplexMatrix(basis.dim, basis.rank);
    for (std::size_t j = 0; j < basis.rank; ++j) {
        basis.sqrt_lambda[j] = std::sqrt(eig.eigenvalues[j]);
        for (std::size_t i = 0; i < basis.dim; ++i) basis.vectors(i, j) = eig.eigenvectors(i, j);
    }
    return basis;
}

void check_isometry(const ComplexMatrix& u, std::size_t rank) {
    if (u.cols() != rank) {
        throw validation_error("isometry has " + std::to_string(u.cols()) +
                               " columns but the state has rank " + std::to_string(rank));
    }
    if (u.rows() < u.cols()) throw validation_error("isometry needs at least rank rows");
    if (u.rows() > rank * rank) {
        throw validation_error("isometry has more than rank^2 rows; larger ensembles add nothing");
    }
    const ComplexMatrix gram = u.adjoint() * u;
    double err = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            const cx want = (i == j) ? cx(1.0, 0.0) : cx(0.0, 0.0);
            err = std::max(err, std::abs(gram(i, j) - want));
        }
    }
    if (err > 1e-10) throw validation_error("matrix is not an isometry (columns not orthonormal)");
}

// tilde_i = sum_j u(i,j) sqrt(lambda_j) |e_j>; probability = |tilde_i|^2.
std::vector<cx> subnormalized_member(const ComplexMatrix& u, const SpectralBasis& basis,
                                     std::size_t i) {
    std::vector<cx> tilde(basis.dim, cx(0.0, 0.0));
    for (std::size_t j = 0; j < basis.rank; ++j) {
        const cx coef = u(i, j) * basis.sqrt_lambda[j];
        if (coef == cx(0.0, 0.0)) continue;
        for (std::size_t k = 0; k < basis.dim; ++k) tilde[k] += coef * basis.vectors(k, j);
    }
    return tilde;
}

double norm_sq(const std::vector<cx>& v) {
    double s = 0.0;
    for (const cx& a : v) s += std::norm(a);
    return s;
}

// Optimizer state: the sub-normalized members, their probabilities, and each
// member's pure value, kept consistent with the current isometry rows.
struct Workspace {
    const PureValueFn* fn = nullptr;
    std::size_t da = 0, db = 0;
    std::vector<std::vector<cx>> tilde;
    std::vector<double> prob;
    std::vector<double> val;

    double member_value(const std::vector<cx>& sub, double p) const {
        if (p < kProbCut) return 0.0;
        std::vector<cx> ket(sub.size());
        const double inv = 1.0 / std::sqrt(p);
        for (std::size_t k = 0; k < sub.size(); ++k) ket[k] = sub[k] * inv;
        return (*fn)(ket, da, db);
    }

    void refresh(std::size_t i) {
        prob[i] = norm_sq(tilde[i]);
        val[i] = member_value(tilde[i], prob[i]);
    }

    double average() const {
        double s = 0.0;
        for (std::size_t i = 0; i < prob.size(); ++i) {
            if (prob[i] >= kProbCut) s += prob[i] * val[i];
        }
        return s;
    }
};

// Contribution of the rotated pair (i,k) under the 2x2 unitary
// [c, s e^{i phi}; -s e^{-i phi}, c] acting on rows i,k.
double pair_objective(const Workspace& ws, std::size_t i, std::size_t k, double theta, double phi,
                      std::vector<cx>& out_i, std::vector<cx>& out_k, double& pi, double& pk,
                      double& vi, double& vk) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cx ph = std::polar(1.0, phi);
    const std::size_t d = ws.tilde[i].size();
    out_i.resize(d);
    out_k.resize(d);
    for (std::size_t t = 0; t < d; ++t) {
        out_i[t] = c * ws.tilde[i][t] + s * ph * ws.tilde[k][t];
        out_k[t] = -s * std::conj(ph) * ws.tilde[i][t] + c * ws.tilde[k][t];
    }
    pi = norm_sq(out_i);
    pk = norm_sq(out_k);
    vi = ws.member_value(out_i, pi);
    vk = ws.member_value(out_k, pk);
    double s1 = (pi >= kProbCut) ? pi * vi : 0.0;
    double s2 = (pk >= kProbCut) ? pk * vk : 0.0;
    return s1 + s2;
}

void apply_rotation(ComplexMatrix& u, std::size_t i, std::size_t k, double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cx ph = std::polar(1.0, phi);
    for (std::size_t j = 0; j < u.cols(); ++j) {
        const cx a = u(i, j);
        const cx b = u(k, j);
        u(i, j) = c * a + s * ph * b;
        u(k, j) = -s * std::conj(ph) * a + c * b;
    }
}

// One sweep over all row pairs: coarse grid then local refinement; applies a
// rotation whenever it lowers the pair's contribution. Returns improvement.
double sweep(Workspace& ws, ComplexMatrix& u, double improve_tol) {
    static const double kThetaGrid[] = {M_PI / 16.0,       -M_PI / 16.0, M_PI / 8.0, -M_PI / 8.0,
                                        M_PI / 4.0,        -M_PI / 4.0,  3.0 * M_PI / 8.0,
                                        -3.0 * M_PI / 8.0};
    static const double kPhiGrid[] = {0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0};
    const std::size_t m = ws.tilde.size();
    double gained = 0.0;
    std::vector<cx> ti, tk, best_i, best_k;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        for (std::size_t k = i + 1; k < m; ++k) {
            const double base = ((ws.prob[i] >= kProbCut) ? ws.prob[i] * ws.val[i] : 0.0) +
                                ((ws.prob[k] >= kProbCut) ? ws.prob[k] * ws.val[k] : 0.0);
            if (ws.prob[i] < kProbCut && ws.prob[k] < kProbCut) continue;
            double best = base;
            double best_theta = 0.0, best_phi = 0.0;
            double pi, pk, vi, vk;
            double bpi = ws.prob[i], bpk = ws.prob[k], bvi = ws.val[i], bvk = ws.val[k];
            for (double theta : kThetaGrid) {
                for (double phi : kPhiGrid) {
                    const double cand = pair_objective(ws, i, k, theta, phi, ti, tk, pi, pk, vi, vk);
                    if (cand < best - 1e-15) {
                        best = cand;
                        best_theta = theta;
                        best_phi = phi;
                        best_i = ti;
                        best_k = tk;
                        bpi = pi;
                        bpk = pk;
                        bvi = vi;
                        bvk = vk;
                    }
                }
            }
            // Shrinking neighborhood search around the best grid point.
            double st = M_PI / 32.0, sp = M_PI / 8.0;
            while (st > 1e-6) {
                bool moved = false;
                const double dt[] = {st, -st, 0.0, 0.0, st, st, -st, -st};
                const double dp[] = {0.0, 0.0, sp, -sp, sp, -sp, sp, -sp};
                for (int n = 0; n < 8; ++n) {
                    const double theta = best_theta + dt[n];
                    const double phi = best_phi + dp[n];
                    const double cand = pair_objective(ws, i, k, theta, phi, ti, tk, pi, pk, vi, vk);
                    if (cand < best - 1e-15) {
                        best = cand;
                        best_theta = theta;
                        best_phi = phi;
                        best_i = ti;
                        best_k = tk;
                        bpi = pi;
                        bpk = pk;
                        bvi = vi;
                        bvk = vk;
                        moved = true;
                    }
                }
                if (!moved) {
                    st *= 0.5;
                    sp *= 0.5;
                }
            }
            if (best < base - improve_tol && (best_theta != 0.0 || best_phi != 0.0)) {
                ws.tilde[i] = best_i;
                ws.tilde[k] = best_k;
                ws.prob[i] = bpi;
                ws.prob[k] = bpk;
                ws.val[i] = bvi;
                ws.val[k] = bvk;
                apply_rotation(u, i, k, best_theta, best_phi);
                gained += base - best;
            }
        }
    }
    return gained;
}

ComplexMatrix identity_padded_start(std::size_t m, std::size_t r) {
    ComplexMatrix u(m, r);
    for (std::size_t j = 0; j < r; ++j) u(j, j) = cx(1.0, 0.0);
    return u;
}

// Fourier frame: u(i,j) = exp(2 pi i i j / m) / sqrt(m); columns orthonormal
// for any r <= m, and every ensemble member starts populated.
ComplexMatrix fourier_start(std::size_t m, std::size_t r) {
    ComplexMatrix u(m, r);
    const double inv = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            u(i, j) = std::polar(inv, 2.0 * M_PI * static_cast<double>(i * j) / static_cast<double>(m));
        }
    }
    return u;
}

// QR of a Ginibre block via modified Gram-Schmidt gives a Haar isometry.
ComplexMatrix random_isometry(std::size_t m, std::size_t r, Rng& rng) {
    ComplexMatrix u(m, r);
    const std::vector<cx> g = rng.ginibre(m, r);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < r; ++j) u(i, j) = g[i * r + j];
    }
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t p = 0; p < j; ++p) {
            cx dot(0.0, 0.0);
            for (std::size_t i = 0; i < m; ++i) dot += std::conj(u(i, p)) * u(i, j);
            for (std::size_t i = 0; i < m; ++i) u(i, j) -= dot * u(i, p);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(u(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) {
            u(j % m, j) += cx(1.0, 0.0);
            --j;
            continue;
        }
        for (std::size_t i = 0; i < m; ++i) u(i, j) = u(i, j) / nrm;
    }
    return u;
}

struct Candidate {
    double value = 0.0;
    ComplexMatrix u{0, 0};
    Workspace ws;
};

void run_restart(Candidate& cand, const ComplexMatrix& start, const SpectralBasis& basis,
                 const PureValueFn& fn, std::size_t da, std::size_t db, const RoofOptions& opts,
                 bool have_best, double best_value) {
    cand.u = start;
    cand.ws.fn = &fn;
    cand.ws.da = da;
    cand.ws.db = db;
    const std::size_t m = start.rows();
    cand.ws.tilde.resize(m);
    cand.ws.prob.resize(m);
    cand.ws.val.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        cand.ws.tilde[i] = subnormalized_member(start, basis, i);
        cand.ws.refresh(i);
    }
    for (std::size_t s = 0; s < opts.max_sweeps; ++s) {
        const double gained = sweep(cand.ws, cand.u, opts.improve_tol);
        if (gained <= opts.improve_tol) break;
    }
    cand.value = cand.ws.average();
    (void)have_best;
    (void)best_value;
}

RoofResult optimize(const PureValueFn& e, const ComplexMatrix& rho, std::size_t da, std::size_t db,
                    const RoofOptions& opts, bool maximize) {
    if (da * db != rho.rows()) throw validation_error("cut dimensions do not match the density matrix");
    const SpectralBasis basis = spectral_basis(rho);
    const std::size_t r = basis.rank;
    std::size_t m = opts.members;
    if (m == 0) m = std::min(r * r, 2 * r);
    if (m < r) throw validation_error("ensemble size must be at least the state rank");
    if (m > r * r) throw validation_error("ensemble size above rank^2 adds nothing");

    // Minimization of -e is maximization of e; members keep the signed value
    // internally and flip on output.
    PureValueFn fn = e;
    if (maximize) {
        fn = [&e](const std::vector<cx>& ket, std::size_t a, std::size_t b) { return -e(ket, a, b); };
    }

    std::vector<ComplexMatrix> starts;
    if (opts.initial_isometry != nullptr) {
        const ComplexMatrix& w = *opts.initial_isometry;
        check_isometry(w, r);
        if (w.rows() > m) throw validation_error("warm-start isometry has more rows than the ensemble");
        ComplexMatrix padded(m, r);
        for (std::size_t i = 0; i < w.rows(); ++i) {
            for (std::size_t j = 0; j < r; ++j) padded(i, j) = w(i, j);
        }
        starts.push_back(padded);
    }
    starts.push_back(identity_padded_start(m, r));
    if (m > r) starts.push_back(fourier_start(m, r));
    std::size_t restart_index = starts.size();
    while (starts.size() < std::max<std::size_t>(opts.restarts, 1)) {
        Rng rng(derive_seed(opts.seed, restart_index++));
        starts.push_back(random_isometry(m, r, rng));
    }

    Candidate best;
    bool have = false;
    for (const ComplexMatrix& start : starts) {
        Candidate cand;
        run_restart(cand, start, basis, fn, da, db, opts, have, best.value);
        if (!have || cand.value < best.value) {
            best = std::move(cand);
            have = true;
        }
    }

    RoofResult result;
    result.bound = maximize ? "lower" : "upper";
    result.value = maximize ? -best.value : best.value;
    result.isometry = best.u;
    result.restarts_used = starts.size();
    ComplexMatrix recon(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < best.ws.tilde.size(); ++i) {
        const double p = best.ws.prob[i];
        if (p < kProbCut) continue;
        EnsembleMember member;
        member.probability = p;
        member.value = maximize ? -best.ws.val[i] : best.ws.val[i];
        member.ket.resize(rho.rows());
        const double inv = 1.0 / std::sqrt(p);
        for (std::size_t t = 0; t < rho.rows(); ++t) member.ket[t] = best.ws.tilde[i][t] * inv;
        for (std::size_t a = 0; a < rho.rows(); ++a) {
            for (std::size_t b = 0; b < rho.cols(); ++b) {
                recon(a, b) += best.ws.tilde[i][a] * std::conj(best.ws.tilde[i][b]);
            }
        }
        result.ensemble.push_back(std::move(member));
    }
    result.reconstruction_error = recon.max_abs_diff(rho);
    return result;
}

}  // namespace

std::vector<EnsembleMember> ensemble_from_isometry(const ComplexMatrix& isometry,
                                                   const ComplexMatrix& rho) {
    const SpectralBasis basis = spectral_basis(rho);
    check_isometry(isometry, basis.rank);
    std::vector<EnsembleMember> members;
    double total = 0.0;
    for (std::size_t i = 0; i < isometry.rows(); ++i) {
        std::vector<cx> tilde = subnormalized_member(isometry, basis, i);
        const double p = norm_sq(tilde);
        total += p;
        if (p < kProbCut) continue;
        EnsembleMember member;
        member.probability = p;
        member.ket.resize(tilde.size());
        const double inv = 1.0 / std::sqrt(p);
        for (std::size_t t = 0; t < tilde.size(); ++t) member.ket[t] = tilde[t] * inv;
        members.push_back(std::move(member));
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw validation_error("ensemble probabilities do not sum to 1");
    }
    return members;
}

RoofResult roof_minimize(const PureValueFn& e, const ComplexMatrix& rho, std::size_t da,
                         std::size_t db, const RoofOptions& opts) {
    return optimize(e, rho, da, db, opts, false);
}

RoofResult assistance_maximize(const PureValueFn& e, const ComplexMatrix& rho, std::size_t da,
                               std::size_t db, const RoofOptions& opts) {
    return optimize(e, rho, da, db, opts, true);
}

}  // namespace entkit
