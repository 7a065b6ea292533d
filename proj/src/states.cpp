#include "entkit/states.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "entkit/linalg.hpp"

namespace entkit {

namespace {

constexpr std::size_t kMaxKetDim = std::size_t{1} << 20;

void warn(const std::string& msg) { std::cerr << "entkit warning: " << msg << '\n'; }

std::size_t checked_product(const std::vector<std::size_t>& dims) {
    if (dims.empty()) throw validation_error("state needs at least one subsystem");
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw validation_error("subsystem dimension must be positive");
        if (total > kMaxKetDim / d) throw validation_error("total state dimension too large");
        total *= d;
    }
    return total;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

// Offsets into the full index for every combined value of the subset's
// multi-index, enumerated row-major in subset order.
std::vector<std::size_t> subset_offsets(const std::vector<std::size_t>& dims,
                                        const std::vector<std::size_t>& subset) {
    auto strides = strides_of(dims);
    std::size_t count = 1;
    for (auto p : subset) count *= dims[p];
    std::vector<std::size_t> offsets(count, 0);
    for (std::size_t c = 0; c < count; ++c) {
        std::size_t rem = c, offset = 0;
        for (std::size_t q = subset.size(); q-- > 0;) {
            std::size_t p = subset[q];
            offset += (rem % dims[p]) * strides[p];
            rem /= dims[p];
        }
        offsets[c] = offset;
    }
    return offsets;
}

std::vector<std::size_t> sorted_subset(const std::vector<std::size_t>& dims,
                                       const std::vector<std::size_t>& subset,
                                       const char* what) {
    std::vector<std::size_t> s = subset;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw validation_error(std::string(what) + ": duplicate subsystem index");
    if (!s.empty() && s.back() >= dims.size())
        throw validation_error(std::string(what) + ": subsystem index out of range");
    return s;
}

std::vector<std::size_t> complement_of(std::size_t n, const std::vector<std::size_t>& sorted) {
    std::vector<std::size_t> out;
    out.reserve(n - sorted.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < sorted.size() && sorted[j] == i) {
            ++j;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

// --- named-family parameter plumbing

std::string family_err(const std::string& family, const std::string& msg) {
    return "state family '" + family + "': " + msg;
}

const std::string* find_param(const NamedStateSpec& s, const std::string& key) {
    auto it = s.params.find(key);
    return it == s.params.end() ? nullptr : &it->second;
}

double parse_double_token(const NamedStateSpec& s, const std::string& key,
                          const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw validation_error(family_err(s.family, "parameter '" + key + "' is not a number: '" + text + "'"));
    }
}

double require_double(const NamedStateSpec& s, const std::string& key) {
    const std::string* p = find_param(s, key);
    if (!p) throw validation_error(family_err(s.family, "missing parameter '" + key + "'"));
    return parse_double_token(s, key, *p);
}

std::size_t parse_size_token(const NamedStateSpec& s, const std::string& key,
                             const std::string& text) {
    try {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        std::size_t used = 0;
        unsigned long v = std::stoul(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw validation_error(
            family_err(s.family, "parameter '" + key + "' is not a non-negative integer: '" + text + "'"));
    }
}

std::size_t require_size(const NamedStateSpec& s, const std::string& key) {
    const std::string* p = find_param(s, key);
    if (!p) throw validation_error(family_err(s.family, "missing parameter '" + key + "'"));
    return parse_size_token(s, key, *p);
}

std::size_t get_size(const NamedStateSpec& s, const std::string& key, std::size_t fallback) {
    const std::string* p = find_param(s, key);
    return p ? parse_size_token(s, key, *p) : fallback;
}

std::vector<double> parse_list_token(const NamedStateSpec& s, const std::string& key,
                                     const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double_token(s, key, item));
    if (out.empty()) throw validation_error(family_err(s.family, "parameter '" + key + "' is an empty list"));
    return out;
}

std::vector<double> require_list(const NamedStateSpec& s, const std::string& key) {
    const std::string* p = find_param(s, key);
    if (!p) throw validation_error(family_err(s.family, "missing parameter '" + key + "'"));
    return parse_list_token(s, key, *p);
}

void check_keys(const NamedStateSpec& s, std::initializer_list<const char*> allowed) {
    for (const auto& kv : s.params) {
        bool known = false;
        for (const char* a : allowed)
            if (kv.first == a) {
                known = true;
                break;
            }
        if (!known)
            throw validation_error(family_err(s.family, "unknown parameter '" + kv.first + "'"));
    }
}

// Renormalizes in place; warns when the input was visibly off.
void normalize_amplitudes(std::vector<double>& a, const std::string& family) {
    double sumsq = 0.0;
    for (double v : a) sumsq += v * v;
    if (sumsq <= 0.0) throw validation_error(family_err(family, "amplitudes must not all vanish"));
    if (std::abs(sumsq - 1.0) > 1e-8)
        warn(family + " amplitudes renormalized (sum of squares was " + std::to_string(sumsq) + ")");
    double inv = 1.0 / std::sqrt(sumsq);
    for (double& v : a) v *= inv;
}

ComplexMatrix swap_operator(std::size_t m) {
    ComplexMatrix f(m * m, m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) f(i * m + j, j * m + i) = cx{1.0, 0.0};
    return f;
}

MultipartiteState build_ghz(const NamedStateSpec& s) {
    check_keys(s, {"n", "d"});
    std::size_t n = require_size(s, "n");
    std::size_t d = get_size(s, "d", 2);
    if (n < 2) throw validation_error(family_err(s.family, "n must be at least 2"));
    if (d < 2) throw validation_error(family_err(s.family, "d must be at least 2"));
    std::vector<std::size_t> dims(n, d);
    std::size_t total = checked_product(dims);
    auto strides = strides_of(dims);
    std::size_t diag = std::accumulate(strides.begin(), strides.end(), std::size_t{0});
    std::vector<cx> amp(total, cx{0.0, 0.0});
    double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) amp[k * diag] = cx{a, 0.0};
    return MultipartiteState::ket(std::move(dims), std::move(amp));
}

MultipartiteState build_generalized_ghz(const NamedStateSpec& s) {
    check_keys(s, {"n", "lambda"});
    std::size_t n = require_size(s, "n");
    std::vector<double> lambda = require_list(s, "lambda");
    if (n < 2) throw validation_error(family_err(s.family, "n must be at least 2"));
    if (lambda.size() < 2) throw validation_error(family_err(s.family, "need at least two lambda entries"));
    for (double v : lambda)
        if (v < 0.0) throw validation_error(family_err(s.family, "lambda entries must be non-negative"));
    normalize_amplitudes(lambda, s.family);
    std::size_t d = lambda.size();
    std::vector<std::size_t> dims(n, d);
    std::size_t total = checked_product(dims);
    auto strides = strides_of(dims);
    std::size_t diag = std::accumulate(strides.begin(), strides.end(), std::size_t{0});
    std::vector<cx> amp(total, cx{0.0, 0.0});
    for (std::size_t k = 0; k < d; ++k) amp[k * diag] = cx{lambda[k], 0.0};
    return MultipartiteState::ket(std::move(dims), std::move(amp));
}

MultipartiteState build_w(const NamedStateSpec& s) {
    check_keys(s, {"n"});
    std::size_t n = require_size(s, "n");
    if (n < 2) throw validation_error(family_err(s.family, "n must be at least 2"));
    std::vector<std::size_t> dims(n, 2);
    std::size_t total = checked_product(dims);
    std::vector<cx> amp(total, cx{0.0, 0.0});
    double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t p = 0; p < n; ++p) amp[std::size_t{1} << (n - 1 - p)] = cx{a, 0.0};
    return MultipartiteState::ket(std::move(dims), std::move(amp));
}

MultipartiteState build_generalized_w(const NamedStateSpec& s) {
    check_keys(s, {"a"});
    std::vector<double> a = require_list(s, "a");
    if (a.size() < 2) throw validation_error(family_err(s.family, "need at least two amplitudes"));
    normalize_amplitudes(a, s.family);
    std::size_t n = a.size();
    std::vector<std::size_t> dims(n, 2);
    std::size_t total = checked_product(dims);
    std::vector<cx> amp(total, cx{0.0, 0.0});
    for (std::size_t p = 0; p < n; ++p) amp[std::size_t{1} << (n - 1 - p)] = cx{a[p], 0.0};
    return MultipartiteState::ket(std::move(dims), std::move(amp));
}

// sqrt(1-p)|0...0> + sqrt(p) * (single-excitation layer with amplitudes a),
// where a runs over sites and levels 1..d-1, site-major.
MultipartiteState build_gwv(const NamedStateSpec& s) {
    check_keys(s, {"p", "n", "d", "a"});
    double p = require_double(s, "p");
    if (p < 0.0 || p > 1.0) throw validation_error(family_err(s.family, "p must lie in [0,1]"));
    std::size_t n = require_size(s, "n");
    std::size_t d = get_size(s, "d", 2);
    if (n < 2) throw validation_error(family_err(s.family, "n must be at least 2"));
    if (d < 2) throw validation_error(family_err(s.family, "d must be at least 2"));
    std::size_t slots = n * (d - 1);
    std::vector<double> a;
    if (find_param(s, "a")) {
        a = parse_list_token(s, "a", *find_param(s, "a"));
        if (a.size() != slots)
            throw validation_error(family_err(s.family, "expected " + std::to_string(slots) + " amplitudes"));
    } else {
        a.assign(slots, 1.0 / std::sqrt(static_cast<double>(slots)));
    }
    normalize_amplitudes(a, s.family);
    std::vector<std::size_t> dims(n, d);
    std::size_t total = checked_product(dims);
    auto strides = strides_of(dims);
    std::vector<cx> amp(total, cx{0.0, 0.0});
    amp[0] = cx{std::sqrt(1.0 - p), 0.0};
    double sp = std::sqrt(p);
    for (std::size_t site = 0; site < n; ++site)
        for (std::size_t level = 1; level < d; ++level)
            amp[level * strides[site]] = cx{sp * a[site * (d - 1) + (level - 1)], 0.0};
    return MultipartiteState::ket(std::move(dims), std::move(amp));
}

MultipartiteState build_xstate(const NamedStateSpec& s) {
    check_keys(s, {"a", "b", "z"});
    std::vector<double> a = require_list(s, "a");
    std::vector<double> b = require_list(s, "b");
    std::vector<double> zr = require_list(s, "z");
    if (a.size() != b.size() || a.size() != zr.size())
        throw validation_error(family_err(s.family, "a, b, z must have the same length"));
    std::vector<cx> z(zr.size());
    for (std::size_t i = 0; i < zr.size(); ++i) z[i] = cx{zr[i], 0.0};
    ComplexMatrix rho = xstate_density(a, b, z);
    std::size_t m = a.size();
    std::size_t n = 0;
    while ((std::size_t{1} << n) < 2 * m) ++n;
    std::vector<std::size_t> dims(n, 2);
    return MultipartiteState::density(std::move(dims), std::move(rho));
}

MultipartiteState build_from_file_param(const NamedStateSpec& s, bool want_pure) {
    check_keys(s, {"file"});
    const std::string* path = find_param(s, "file");
    if (!path) throw validation_error(family_err(s.family, "missing parameter 'file'"));
    MultipartiteState st = load_state(*path);
    if (st.pure != want_pure)
        throw validation_error(family_err(s.family, "file holds the other kind of state"));
    return st;
}

}  // namespace

// --- MultipartiteState

MultipartiteState MultipartiteState::ket(std::vector<std::size_t> dims, std::vector<cx> amplitudes) {
    std::size_t total = checked_product(dims);
    if (amplitudes.size() != total)
        throw validation_error("ket length " + std::to_string(amplitudes.size()) +
                               " does not match total dimension " + std::to_string(total));
    double norm_sq = 0.0;
    for (const cx& v : amplitudes) norm_sq += std::norm(v);
    if (std::abs(std::sqrt(norm_sq) - 1.0) > tol::unit_norm)
        throw validation_error("ket is not unit-norm (norm " + std::to_string(std::sqrt(norm_sq)) + ")");
    MultipartiteState s;
    s.dims = std::move(dims);
    s.pure = true;
    s.amplitudes = std::move(amplitudes);
    return s;
}

MultipartiteState MultipartiteState::density(std::vector<std::size_t> dims, ComplexMatrix rho) {
    std::size_t total = checked_product(dims);
    if (!rho.square() || rho.rows() != total)
        throw validation_error("density matrix shape does not match total dimension " +
                               std::to_string(total));
    if (!rho.is_hermitian(tol::hermitian)) throw validation_error("density matrix is not hermitian");
    if (std::abs(rho.trace() - cx{1.0, 0.0}) > tol::trace_one)
        throw validation_error("density matrix trace is not 1");
    auto eigs = hermitian_eigenvalues(rho);
    if (!eigs.empty() && eigs.back() < -tol::psd)
        throw validation_error("density matrix has negative eigenvalue " + std::to_string(eigs.back()));
    MultipartiteState s;
    s.dims = std::move(dims);
    s.pure = false;
    s.rho = std::move(rho);
    return s;
}

std::size_t MultipartiteState::total_dim() const {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    return total;
}

ComplexMatrix MultipartiteState::to_density() const {
    if (!pure) return rho;
    std::size_t n = amplitudes.size();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = amplitudes[i] * std::conj(amplitudes[j]);
    return out;
}

// --- subsystem operations

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    std::size_t total = checked_product(dims);
    if (!rho.square() || rho.rows() != total)
        throw validation_error("partial_trace: matrix shape does not match dims");
    auto kept = sorted_subset(dims, keep, "partial_trace");
    auto traced = complement_of(dims.size(), kept);
    auto kept_off = subset_offsets(dims, kept);
    auto traced_off = subset_offsets(dims, traced);
    std::size_t dk = kept_off.size();
    ComplexMatrix out(dk, dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
            cx acc{0.0, 0.0};
            for (std::size_t t : traced_off) acc += rho(kept_off[a] + t, kept_off[b] + t);
            out(a, b) = acc;
        }
    return out;
}

ComplexMatrix reduced_density(const MultipartiteState& s, const std::vector<std::size_t>& keep) {
    if (!s.pure) return partial_trace(s.rho, s.dims, keep);
    auto kept = sorted_subset(s.dims, keep, "reduced_density");
    auto traced = complement_of(s.dims.size(), kept);
    auto kept_off = subset_offsets(s.dims, kept);
    auto traced_off = subset_offsets(s.dims, traced);
    std::size_t dk = kept_off.size(), dt = traced_off.size();
    ComplexMatrix m(dk, dt);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t t = 0; t < dt; ++t) m(a, t) = s.amplitudes[kept_off[a] + traced_off[t]];
    return m * m.adjoint();
}

MultipartiteState reduced_state(const MultipartiteState& s, const std::vector<std::size_t>& keep) {
    auto kept = sorted_subset(s.dims, keep, "reduced_state");
    std::vector<std::size_t> kept_dims;
    kept_dims.reserve(kept.size());
    for (auto p : kept) kept_dims.push_back(s.dims[p]);
    return MultipartiteState::density(std::move(kept_dims), reduced_density(s, keep));
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& transposed) {
    std::size_t total = checked_product(dims);
    if (!rho.square() || rho.rows() != total)
        throw validation_error("partial_transpose: matrix shape does not match dims");
    auto t_set = sorted_subset(dims, transposed, "partial_transpose");
    auto rest = complement_of(dims.size(), t_set);
    auto t_off = subset_offsets(dims, t_set);
    auto r_off = subset_offsets(dims, rest);
    ComplexMatrix out(total, total);
    for (std::size_t a : r_off)
        for (std::size_t b : r_off)
            for (std::size_t u : t_off)
                for (std::size_t v : t_off) out(a + v, b + u) = rho(a + u, b + v);
    return out;
}

namespace {

// new_index[old_index] for reordering tensor factors to dims[order[0]], ...
std::vector<std::size_t> permutation_index_map(const std::vector<std::size_t>& dims,
                                               const std::vector<std::size_t>& order) {
    std::size_t n = dims.size();
    if (order.size() != n) throw validation_error("permutation length must match subsystem count");
    std::vector<bool> seen(n, false);
    for (std::size_t p : order) {
        if (p >= n || seen[p]) throw validation_error("invalid subsystem permutation");
        seen[p] = true;
    }
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    auto old_strides = strides_of(dims);
    std::vector<std::size_t> new_dims(n);
    for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
    auto new_strides = strides_of(new_dims);
    std::vector<std::size_t> map(total, 0);
    std::vector<std::size_t> digits(n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t p = 0; p < n; ++p) {
            digits[p] = rem / old_strides[p];
            rem %= old_strides[p];
        }
        std::size_t out = 0;
        for (std::size_t k = 0; k < n; ++k) out += digits[order[k]] * new_strides[k];
        map[idx] = out;
    }
    return map;
}

}  // namespace

std::vector<cx> permute_ket(const std::vector<cx>& ket, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& order) {
    std::size_t total = checked_product(dims);
    if (ket.size() != total) throw validation_error("permute_ket: ket length does not match dims");
    auto map = permutation_index_map(dims, order);
    std::vector<cx> out(total);
    for (std::size_t i = 0; i < total; ++i) out[map[i]] = ket[i];
    return out;
}

ComplexMatrix permute_density(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& order) {
    std::size_t total = checked_product(dims);
    if (!rho.square() || rho.rows() != total)
        throw validation_error("permute_density: matrix shape does not match dims");
    auto map = permutation_index_map(dims, order);
    ComplexMatrix out(total, total);
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j) out(map[i], map[j]) = rho(i, j);
    return out;
}

ComplexMatrix realign(const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    if (!rho.square() || rho.rows() != da * db)
        throw validation_error("realign: matrix shape does not match da*db");
    ComplexMatrix out(da * da, db * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    out(j * da + i, l * db + k) = rho(i * db + k, j * db + l);
    return out;
}

ComplexMatrix realign_row_form(const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    if (!rho.square() || rho.rows() != da * db)
        throw validation_error("realign: matrix shape does not match da*db");
    ComplexMatrix out(da * da, db * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    out(i * da + j, k * db + l) = rho(i * db + k, j * db + l);
    return out;
}

SchmidtForm schmidt(const std::vector<cx>& ket, std::size_t da, std::size_t db) {
    if (ket.size() != da * db) throw validation_error("schmidt: ket length does not match da*db");
    double norm_sq = 0.0;
    for (const cx& v : ket) norm_sq += std::norm(v);
    if (std::abs(norm_sq - 1.0) > 1e-9) throw validation_error("schmidt: ket is not unit-norm");
    ComplexMatrix m(da, db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) m(i, k) = ket[i * db + k];
    SvdResult sv = svd(m);
    SchmidtForm out;
    out.coefficients = sv.singular_values;
    out.left = sv.u;
    out.right = sv.v.conjugate();
    out.rank = 0;
    for (double c : out.coefficients)
        if (c * c > tol::schmidt_rank) ++out.rank;
    return out;
}

MultipartiteState purify(const ComplexMatrix& rho) {
    if (!rho.square()) throw validation_error("purify: matrix must be square");
    if (!rho.is_hermitian(tol::hermitian)) throw validation_error("purify: matrix is not hermitian");
    if (std::abs(rho.trace() - cx{1.0, 0.0}) > 1e-8)
        throw validation_error("purify: matrix trace is not 1");
    EigenSystem es = hermitian_eig(rho);
    std::size_t d = rho.rows();
    std::vector<double> lambda;
    for (double v : es.eigenvalues) {
        if (v < -tol::psd) throw validation_error("purify: matrix has negative eigenvalue");
        lambda.push_back(v < 0.0 ? 0.0 : v);
    }
    std::size_t rank = 0;
    for (double v : lambda)
        if (v > 1e-12) ++rank;
    if (rank == 0) throw validation_error("purify: matrix is numerically zero");
    double sum = 0.0;
    for (std::size_t j = 0; j < rank; ++j) sum += lambda[j];
    std::vector<cx> amp(d * rank, cx{0.0, 0.0});
    for (std::size_t e = 0; e < d; ++e)
        for (std::size_t j = 0; j < rank; ++j)
            amp[e * rank + j] = es.eigenvectors(e, j) * std::sqrt(lambda[j] / sum);
    return MultipartiteState::ket({d, rank}, std::move(amp));
}

std::vector<cx> random_pure(const std::vector<std::size_t>& dims, Rng& rng) {
    std::size_t total = checked_product(dims);
    std::vector<cx> amp(total);
    double norm_sq = 0.0;
    for (cx& v : amp) {
        v = rng.complex_normal();
        norm_sq += std::norm(v);
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (cx& v : amp) v *= inv;
    return amp;
}

ComplexMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
    if (dim == 0 || rank == 0) throw validation_error("random_density: dim and rank must be positive");
    ComplexMatrix g(dim, rank, rng.ginibre(dim, rank));
    ComplexMatrix rho = g * g.adjoint();
    cx tr = rho.trace();
    rho *= cx{1.0 / tr.real(), 0.0};
    return rho;
}

// --- named families

NamedStateSpec parse_state_uri(const std::string& uri) {
    const std::string prefix = "named:";
    if (uri.rfind(prefix, 0) != 0)
        throw validation_error("state URI must start with 'named:': " + uri);
    std::string rest = uri.substr(prefix.size());
    NamedStateSpec spec;
    std::size_t q = rest.find('?');
    spec.family = rest.substr(0, q);
    if (spec.family.empty()) throw validation_error("state URI has no family name: " + uri);
    if (q != std::string::npos) {
        std::string query = rest.substr(q + 1);
        std::stringstream ss(query);
        std::string token;
        while (std::getline(ss, token, '&')) {
            if (token.empty()) continue;
            std::size_t eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                throw validation_error("malformed state parameter '" + token + "' in " + uri);
            spec.params[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return spec;
}

MultipartiteState build_named(const NamedStateSpec& spec) {
    const std::string& f = spec.family;
    if (f == "ghz") return build_ghz(spec);
    if (f == "generalized_ghz" || f == "gghz") return build_generalized_ghz(spec);
    if (f == "w") return build_w(spec);
    if (f == "generalized_w" || f == "gw") return build_generalized_w(spec);
    if (f == "gwv") return build_gwv(spec);
    if (f == "bell") {
        check_keys(spec, {});
        double a = 1.0 / std::sqrt(2.0);
        return MultipartiteState::ket({2, 2}, {cx{a, 0.0}, cx{0.0, 0.0}, cx{0.0, 0.0}, cx{a, 0.0}});
    }
    if (f == "werner_x" || f == "werner_c" || f == "werner") {
        if (f == "werner_x")
            check_keys(spec, {"x", "m"});
        else if (f == "werner_c")
            check_keys(spec, {"c", "m"});
        else
            check_keys(spec, {"x", "c", "m"});
        std::size_t m = require_size(spec, "m");
        bool has_x = find_param(spec, "x") != nullptr;
        bool has_c = find_param(spec, "c") != nullptr;
        if (f == "werner_x" || (f == "werner" && has_x && !has_c)) {
            ComplexMatrix rho = werner_x_density(require_double(spec, "x"), m);
            return MultipartiteState::density({m, m}, std::move(rho));
        }
        if (f == "werner_c" || (f == "werner" && has_c && !has_x)) {
            ComplexMatrix rho = werner_c_density(require_double(spec, "c"), m);
            return MultipartiteState::density({m, m}, std::move(rho));
        }
        throw validation_error(family_err(f, "give exactly one of 'x' or 'c'"));
    }
    if (f == "isotropic_f" || f == "isotropic_t" || f == "isotropic") {
        if (f == "isotropic_f")
            check_keys(spec, {"f", "m"});
        else if (f == "isotropic_t")
            check_keys(spec, {"t", "m"});
        else
            check_keys(spec, {"f", "t", "m"});
        std::size_t m = require_size(spec, "m");
        bool has_f = find_param(spec, "f") != nullptr;
        bool has_t = find_param(spec, "t") != nullptr;
        double v;
        if (f == "isotropic_f" || (f == "isotropic" && has_f && !has_t))
            v = require_double(spec, "f");
        else if (f == "isotropic_t" || (f == "isotropic" && has_t && !has_f))
            v = require_double(spec, "t");
        else
            throw validation_error(family_err(f, "give exactly one of 'f' or 't'"));
        ComplexMatrix rho = isotropic_f_density(v, m);
        return MultipartiteState::density({m, m}, std::move(rho));
    }
    if (f == "xstate") return build_xstate(spec);
    if (f == "custom_ket") return build_from_file_param(spec, true);
    if (f == "custom_density") return build_from_file_param(spec, false);
    throw validation_error("unknown state family '" + f + "'");
}

MultipartiteState load_state(const std::string& source) {
    if (source.rfind("named:", 0) == 0) return build_named(parse_state_uri(source));
    std::ifstream in(source);
    if (!in) throw validation_error("cannot open state file: " + source);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("state file " + source + " is not valid JSON: " + e.what());
    }
    return state_from_json(j);
}

nlohmann::ordered_json state_to_json(const MultipartiteState& s) {
    nlohmann::ordered_json j;
    j["dims"] = s.dims;
    j["kind"] = s.pure ? "ket" : "density";
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    if (s.pure) {
        for (const cx& v : s.amplitudes) data.push_back({v.real(), v.imag()});
    } else {
        for (const cx& v : s.rho.data()) data.push_back({v.real(), v.imag()});
    }
    j["data"] = std::move(data);
    return j;
}

MultipartiteState state_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("kind") || !j.contains("data"))
        throw validation_error("state JSON needs 'dims', 'kind', and 'data' fields");
    if (!j["dims"].is_array() || j["dims"].empty())
        throw validation_error("state JSON 'dims' must be a non-empty array");
    std::vector<std::size_t> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0)
            throw validation_error("state JSON 'dims' entries must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind != "ket" && kind != "density")
        throw validation_error("state JSON 'kind' must be 'ket' or 'density'");
    if (!j["data"].is_array()) throw validation_error("state JSON 'data' must be an array");
    std::vector<cx> entries;
    entries.reserve(j["data"].size());
    for (const auto& e : j["data"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw validation_error("state JSON 'data' entries must be [re, im] pairs");
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    std::size_t total = checked_product(dims);
    if (kind == "ket") {
        if (entries.size() != total)
            throw validation_error("state JSON ket length does not match dims");
        return MultipartiteState::ket(std::move(dims), std::move(entries));
    }
    if (entries.size() != total * total)
        throw validation_error("state JSON density length does not match dims");
    return MultipartiteState::density(std::move(dims), ComplexMatrix(total, total, std::move(entries)));
}

// --- analytic densities

ComplexMatrix werner_x_density(double x, std::size_t m) {
    if (m < 2) throw validation_error("werner state needs m >= 2");
    if (x < 0.0 || x > 1.0) throw validation_error("werner parameter x must lie in [0,1]");
    // x is the weight on the antisymmetric projector.
    double alpha = (1.0 - x) / static_cast<double>(m * (m + 1));
    double beta = x / static_cast<double>(m * (m - 1));
    ComplexMatrix rho = swap_operator(m);
    for (std::size_t r = 0; r < m * m; ++r)
        for (std::size_t c = 0; c < m * m; ++c) {
            cx f = rho(r, c);
            cx i = (r == c) ? cx{1.0, 0.0} : cx{0.0, 0.0};
            rho(r, c) = (alpha + beta) * i + (alpha - beta) * f;
        }
    return rho;
}

ComplexMatrix werner_c_density(double c, std::size_t m) {
    if (m < 2) throw validation_error("werner state needs m >= 2");
    if (c < -1.0 || c > 1.0) throw validation_error("werner parameter c must lie in [-1,1]");
    // c = <F>, the flip-operator expectation.
    double denom = static_cast<double>(m) * static_cast<double>(m * m - 1);
    double ci = (static_cast<double>(m) - c) / denom;
    double cf = (static_cast<double>(m) * c - 1.0) / denom;
    ComplexMatrix rho = swap_operator(m);
    for (std::size_t r = 0; r < m * m; ++r)
        for (std::size_t col = 0; col < m * m; ++col) {
            cx f = rho(r, col);
            cx i = (r == col) ? cx{1.0, 0.0} : cx{0.0, 0.0};
            rho(r, col) = ci * i + cf * f;
        }
    return rho;
}

ComplexMatrix isotropic_f_density(double f, std::size_t m) {
    if (m < 2) throw validation_error("isotropic state needs m >= 2");
    if (f < 0.0 || f > 1.0) throw validation_error("isotropic fidelity must lie in [0,1]");
    std::size_t n = m * m;
    double off = (1.0 - f) / static_cast<double>(n - 1);
    ComplexMatrix rho(n, n);
    for (std::size_t r = 0; r < n; ++r) rho(r, r) = cx{off, 0.0};
    double p = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t r = i * m + i, c = j * m + j;
            rho(r, c) += cx{(f - off) * p, 0.0};
        }
    return rho;
}

ComplexMatrix xstate_density(const std::vector<double>& a, const std::vector<double>& b,
                             const std::vector<cx>& z) {
    std::size_t m = a.size();
    if (m < 2 || b.size() != m || z.size() != m)
        throw validation_error("x-state needs matching a, b, z lists of length >= 2");
    if ((m & (m - 1)) != 0)
        throw validation_error("x-state list length must be a power of two (half the total dimension)");
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] < 0.0 || b[i] < 0.0)
            throw validation_error("x-state diagonal entries must be non-negative");
        sum += a[i] + b[i];
    }
    if (std::abs(sum - 1.0) > tol::trace_one)
        throw validation_error("x-state diagonal must sum to 1");
    for (std::size_t i = 0; i < m; ++i)
        if (std::abs(z[i]) > std::sqrt(a[i] * b[i]) + 1e-12)
            throw validation_error("x-state needs |z_i| <= sqrt(a_i b_i)");
    std::size_t dim = 2 * m;
    ComplexMatrix rho(dim, dim);
    for (std::size_t i = 0; i < m; ++i) {
        rho(i, i) = cx{a[i], 0.0};
        rho(dim - 1 - i, dim - 1 - i) = cx{b[i], 0.0};
        rho(i, dim - 1 - i) = z[i];
        rho(dim - 1 - i, i) = std::conj(z[i]);
    }
    return rho;
}

}  // namespace entkit
