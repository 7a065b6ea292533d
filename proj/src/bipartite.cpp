#include "entkit/bipartite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entkit/linalg.hpp"

namespace entkit {

namespace {

enum class Family {
    reduced,
    negativity,
    log_negativity,
    ccnr,
    schmidt_number,
    geometric,
    q_concurrence,
    alpha_concurrence,
    two_qubit_concurrence,
    two_qubit_eof,
    two_qubit_tangle,
    werner_eof,
    isotropic_eof,
    lower_bound_concurrence,
    lower_bound_q_concurrence,
    lower_bound_alpha_concurrence,
};

std::string m_err(const MeasureSpec& m, const std::string& msg) {
    return "measure '" + m.family + "': " + msg;
}

double m_double(const MeasureSpec& m, const std::string& key) {
    auto it = m.params.find(key);
    if (it == m.params.end()) throw validation_error(m_err(m, "missing parameter '" + key + "'"));
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw validation_error(m_err(m, "parameter '" + key + "' is not a number: '" + it->second + "'"));
    }
}

bool m_has(const MeasureSpec& m, const std::string& key) {
    return m.params.find(key) != m.params.end();
}

// Families with their own parameter handling; anything unlisted is tried as a
// reduced-function kind.
bool family_of(const std::string& name, Family& out) {
    static const std::map<std::string, Family> table = {
        {"negativity", Family::negativity},
        {"log_negativity", Family::log_negativity},
        {"ccnr", Family::ccnr},
        {"schmidt_number", Family::schmidt_number},
        {"geometric", Family::geometric},
        {"q_concurrence", Family::q_concurrence},
        {"alpha_concurrence", Family::alpha_concurrence},
        {"two_qubit_concurrence", Family::two_qubit_concurrence},
        {"two_qubit_eof", Family::two_qubit_eof},
        {"two_qubit_tangle", Family::two_qubit_tangle},
        {"werner_eof", Family::werner_eof},
        {"isotropic_eof", Family::isotropic_eof},
        {"lower_bound_concurrence", Family::lower_bound_concurrence},
        {"lower_bound_q_concurrence", Family::lower_bound_q_concurrence},
        {"lower_bound_alpha_concurrence", Family::lower_bound_alpha_concurrence},
    };
    auto it = table.find(name);
    if (it == table.end()) return false;
    out = it->second;
    return true;
}

ReducedFn reduced_fn_of(const MeasureSpec& m) {
    std::string kind = m.family;
    std::map<std::string, double> params;
    if (kind == "eof") kind = "S";
    if (kind == "concurrence") kind = "h_C";
    for (const auto& kv : m.params) {
        try {
            std::size_t used = 0;
            double v = std::stod(kv.second, &used);
            if (used != kv.second.size()) throw std::invalid_argument("trailing characters");
            params[kv.first] = v;
        } catch (const std::exception&) {
            throw validation_error(
                m_err(m, "parameter '" + kv.first + "' is not a number: '" + kv.second + "'"));
        }
    }
    return make_reduced_fn(kind, std::move(params));
}

ComplexMatrix marginal_a(const std::vector<cx>& ket, std::size_t da, std::size_t db) {
    ComplexMatrix m(da, db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) m(i, k) = ket[i * db + k];
    return m * m.adjoint();
}

void check_ket(const MeasureSpec& m, const std::vector<cx>& ket, std::size_t da, std::size_t db) {
    if (ket.size() != da * db) throw validation_error(m_err(m, "ket length does not match cut"));
    double n = 0.0;
    for (const cx& v : ket) n += std::norm(v);
    if (std::abs(n - 1.0) > 1e-9) throw validation_error(m_err(m, "ket is not unit-norm"));
}

void check_density(const MeasureSpec& m, const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    if (!rho.square() || rho.rows() != da * db)
        throw validation_error(m_err(m, "density shape does not match cut"));
}

double pt_negative_sum(const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    ComplexMatrix pt = partial_transpose(rho, {da, db}, {0});
    double neg = 0.0;
    for (double v : hermitian_eigenvalues(pt))
        if (v < 0.0) neg -= v;
    return neg <= 1e-12 ? 0.0 : neg;
}

double realign_trace_norm(const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    return trace_norm(realign(rho, da, db));
}

nlohmann::ordered_json cut_meta(std::size_t da, std::size_t db) {
    nlohmann::ordered_json j;
    j["cut"] = {da, db};
    return j;
}

MeasureResult reduced_result(const ReducedFn& fn, const ComplexMatrix& rho_a, std::size_t da,
                             std::size_t db) {
    MeasureResult r;
    r.value = eval_h(fn, rho_a);
    r.method = "reduced_fn";
    r.metadata = cut_meta(da, db);
    r.metadata["kind"] = fn.kind;
    return r;
}

std::size_t side_dim(const MeasureSpec& m, std::size_t da, std::size_t db) {
    if (m_has(m, "m")) {
        double v = m_double(m, "m");
        if (v != static_cast<double>(da))
            throw validation_error(m_err(m, "parameter m does not match the cut"));
    }
    if (da != db) throw validation_error(m_err(m, "needs equal side dimensions"));
    return da;
}

}  // namespace

MeasureSpec parse_measure_spec(const std::string& text) {
    if (text.empty()) throw validation_error("empty measure");
    MeasureSpec m;
    std::size_t colon = text.find(':');
    m.family = text.substr(0, colon);
    if (m.family.empty()) throw validation_error("measure has no family name: '" + text + "'");
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string token;
        while (std::getline(ss, token, ',')) {
            if (token.empty()) continue;
            std::size_t eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                throw validation_error("malformed measure parameter '" + token + "' in '" + text + "'");
            m.params[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return m;
}

double binary_entropy(double x) {
    double s = 0.0;
    if (x > 0.0) s -= x * std::log2(x);
    if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

double eof_from_concurrence(double c) {
    c = std::min(1.0, std::max(0.0, c));
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

double wootters_concurrence(const ComplexMatrix& rho) {
    if (!rho.square() || rho.rows() != 4)
        throw validation_error("wootters concurrence needs a two-qubit density matrix");
    ComplexMatrix yy(4, 4);
    yy(0, 3) = cx{-1.0, 0.0};
    yy(1, 2) = cx{1.0, 0.0};
    yy(2, 1) = cx{1.0, 0.0};
    yy(3, 0) = cx{-1.0, 0.0};
    ComplexMatrix tilde = yy * rho.conjugate() * yy;
    ComplexMatrix root = matrix_sqrt(rho);
    ComplexMatrix m = root * tilde * root;
    std::vector<double> nu = hermitian_eigenvalues(m);
    double c = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        double l = std::sqrt(std::max(0.0, nu[i]));
        c += (i == 0) ? l : -l;
    }
    return std::max(0.0, c);
}

double two_qubit_eof_value(const ComplexMatrix& rho) {
    return eof_from_concurrence(wootters_concurrence(rho));
}

double two_qubit_tangle_value(const ComplexMatrix& rho) {
    double c = wootters_concurrence(rho);
    return c * c;
}

double negativity_value(const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    return pt_negative_sum(rho, da, db);
}

double log_negativity_value(const ComplexMatrix& rho, std::size_t da, std::size_t db) {
    double neg = pt_negative_sum(rho, da, db);
    return neg == 0.0 ? 0.0 : std::log2(1.0 + 2.0 * neg);
}

double werner_eof_value(double x, std::size_t m) {
    if (m < 2) throw validation_error("werner_eof needs m >= 2");
    if (x < 0.0 || x > 1.0) throw validation_error("werner_eof needs x in [0,1]");
    if (x <= 0.5) return 0.0;
    double s = std::sqrt(x * (1.0 - x));
    double lo = 1.0 - 2.0 * s;
    double hi = 1.0 + 2.0 * s;
    double value = 1.0 - (0.5 + s) * std::log2(hi);
    if (lo > 0.0) value -= (0.5 - s) * std::log2(lo);
    return value;
}

double isotropic_eof_value(double f, std::size_t m) {
    if (m < 2) throw validation_error("isotropic_eof needs m >= 2");
    if (f < 0.0 || f > 1.0) throw validation_error("isotropic_eof needs fidelity in [0,1]");
    double md = static_cast<double>(m);
    if (f <= 1.0 / md) return 0.0;
    double knee = 4.0 * (md - 1.0) / (md * md);
    if (f < knee) {
        double g = (std::sqrt(f) + std::sqrt((md - 1.0) * (1.0 - f)));
        double gamma = g * g / md;
        return binary_entropy(gamma) + (1.0 - gamma) * std::log2(md - 1.0);
    }
    // For m = 2 the final branch degenerates to the single point f = 1.
    if (m == 2) return 1.0;
    return (f - 1.0) * md * std::log2(md - 1.0) / (md - 2.0) + std::log2(md);
}

SandwichResult assistance_upper_sandwich(const ComplexMatrix& rho) {
    if (!rho.square() || rho.rows() != 4)
        throw validation_error("assistance_upper_sandwich needs a two-qubit density matrix");
    SandwichResult r;
    r.concurrence = wootters_concurrence(rho);
    r.twice_negativity = 2.0 * negativity_value(rho, 2, 2);
    double c = r.concurrence;
    r.lower = std::sqrt((1.0 - c) * (1.0 - c) + c * c) - 1.0 + c;
    r.holds = (r.lower <= r.twice_negativity + 1e-9) && (r.twice_negativity <= c + 1e-9);
    return r;
}

bool measure_reduced_fn(const MeasureSpec& m, ReducedFn& fn) {
    Family fam;
    if (family_of(m.family, fam)) return false;
    fn = reduced_fn_of(m);
    return true;
}

MeasureResult pure_measure(const MeasureSpec& m, const std::vector<cx>& ket, std::size_t da,
                           std::size_t db) {
    check_ket(m, ket, da, db);
    Family fam;
    if (!family_of(m.family, fam))
        return reduced_result(reduced_fn_of(m), marginal_a(ket, da, db), da, db);

    MeasureResult r;
    r.method = "closed_form";
    r.metadata = cut_meta(da, db);
    switch (fam) {
        case Family::negativity: {
            SchmidtForm sf = schmidt(ket, da, db);
            double s = 0.0;
            for (double c : sf.coefficients) s += c;
            r.value = std::max(0.0, 0.5 * (s * s - 1.0));
            r.metadata["schmidt_rank"] = sf.rank;
            return r;
        }
        case Family::log_negativity: {
            SchmidtForm sf = schmidt(ket, da, db);
            double s = 0.0;
            for (double c : sf.coefficients) s += c;
            r.value = std::max(0.0, 2.0 * std::log2(std::max(1.0, s)));
            r.metadata["schmidt_rank"] = sf.rank;
            return r;
        }
        case Family::ccnr: {
            SchmidtForm sf = schmidt(ket, da, db);
            double s = 0.0;
            for (double c : sf.coefficients) s += c;
            r.value = std::max(0.0, 2.0 * std::log(std::max(1.0, s)));
            r.metadata["realign_trace_norm"] = s * s;
            return r;
        }
        case Family::schmidt_number: {
            SchmidtForm sf = schmidt(ket, da, db);
            r.value = static_cast<double>(sf.rank);
            return r;
        }
        case Family::geometric: {
            SchmidtForm sf = schmidt(ket, da, db);
            double top = sf.coefficients.empty() ? 1.0 : sf.coefficients.front();
            r.value = std::max(0.0, 1.0 - top * top);
            r.metadata["max_schmidt_coefficient"] = top;
            return r;
        }
        case Family::q_concurrence: {
            double q = m_double(m, "q");
            if (q <= 1.0) throw validation_error(m_err(m, "needs q > 1"));
            std::vector<double> mu = hermitian_eigenvalues(marginal_a(ket, da, db));
            double s = 0.0;
            for (double v : mu)
                if (v > 0.0) s += std::pow(v, q);
            r.value = std::max(0.0, 1.0 - s);
            return r;
        }
        case Family::alpha_concurrence: {
            double a = m_double(m, "alpha");
            if (a <= 0.0 || a >= 1.0) throw validation_error(m_err(m, "needs 0 < alpha < 1"));
            std::vector<double> mu = hermitian_eigenvalues(marginal_a(ket, da, db));
            double s = 0.0;
            for (double v : mu)
                if (v > 0.0) s += std::pow(v, a);
            r.value = std::max(0.0, s - 1.0);
            return r;
        }
        case Family::two_qubit_concurrence:
        case Family::two_qubit_eof:
        case Family::two_qubit_tangle: {
            if (da != 2 || db != 2) throw validation_error(m_err(m, "needs a two-qubit state"));
            double c = 2.0 * std::abs(ket[0] * ket[3] - ket[1] * ket[2]);
            if (fam == Family::two_qubit_concurrence)
                r.value = c;
            else if (fam == Family::two_qubit_eof)
                r.value = eof_from_concurrence(c);
            else
                r.value = c * c;
            r.metadata["concurrence"] = c;
            return r;
        }
        case Family::werner_eof:
        case Family::isotropic_eof:
            throw validation_error(m_err(m, "needs a density input from the matching family"));
        case Family::lower_bound_concurrence:
        case Family::lower_bound_q_concurrence:
        case Family::lower_bound_alpha_concurrence: {
            MultipartiteState s = MultipartiteState::ket({da, db}, ket);
            return mixed_measure(m, s.to_density(), da, db);
        }
        case Family::reduced:
            break;
    }
    throw std::logic_error("unreachable measure family");
}

MeasureResult mixed_measure(const MeasureSpec& m, const ComplexMatrix& rho, std::size_t da,
                            std::size_t db) {
    check_density(m, rho, da, db);
    Family fam;
    if (!family_of(m.family, fam)) {
        reduced_fn_of(m);  // validate the spelling before reporting the routing error
        throw validation_error(
            m_err(m, "needs a pure state across this cut; mixed states go through the convex-roof "
                     "optimizer"));
    }
    MeasureResult r;
    r.method = "closed_form";
    r.metadata = cut_meta(da, db);
    switch (fam) {
        case Family::negativity:
            r.value = negativity_value(rho, da, db);
            return r;
        case Family::log_negativity:
            r.value = log_negativity_value(rho, da, db);
            return r;
        case Family::ccnr: {
            double norm = realign_trace_norm(rho, da, db);
            r.value = std::max(0.0, std::log(norm));
            r.metadata["realign_trace_norm"] = norm;
            return r;
        }
        case Family::schmidt_number:
        case Family::geometric:
        case Family::q_concurrence:
        case Family::alpha_concurrence:
            throw validation_error(
                m_err(m, "needs a pure state across this cut; mixed states go through the "
                         "convex-roof optimizer"));
        case Family::two_qubit_concurrence:
        case Family::two_qubit_eof:
        case Family::two_qubit_tangle: {
            if (da != 2 || db != 2) throw validation_error(m_err(m, "needs a two-qubit state"));
            double c = wootters_concurrence(rho);
            if (fam == Family::two_qubit_concurrence)
                r.value = c;
            else if (fam == Family::two_qubit_eof)
                r.value = eof_from_concurrence(c);
            else
                r.value = c * c;
            r.metadata["concurrence"] = c;
            return r;
        }
        case Family::werner_eof: {
            std::size_t md = side_dim(m, da, db);
            cx fexp{0.0, 0.0};
            for (std::size_t i = 0; i < md; ++i)
                for (std::size_t j = 0; j < md; ++j) fexp += rho(i * md + j, j * md + i);
            double x = std::min(1.0, std::max(0.0, 0.5 * (1.0 - fexp.real())));
            double resid = rho.max_abs_diff(werner_x_density(x, md));
            if (resid > 1e-8)
                throw validation_error(m_err(m, "state is not a werner state (residual " +
                                                    std::to_string(resid) + ")"));
            r.value = werner_eof_value(x, md);
            r.metadata["x"] = x;
            r.metadata["model_residual"] = resid;
            return r;
        }
        case Family::isotropic_eof: {
            std::size_t md = side_dim(m, da, db);
            cx f{0.0, 0.0};
            for (std::size_t i = 0; i < md; ++i)
                for (std::size_t j = 0; j < md; ++j) f += rho(i * md + i, j * md + j);
            double fid = std::min(1.0, std::max(0.0, f.real() / static_cast<double>(md)));
            double resid = rho.max_abs_diff(isotropic_f_density(fid, md));
            if (resid > 1e-8)
                throw validation_error(m_err(m, "state is not an isotropic state (residual " +
                                                    std::to_string(resid) + ")"));
            r.value = isotropic_eof_value(fid, md);
            r.metadata["fidelity"] = fid;
            r.metadata["model_residual"] = resid;
            return r;
        }
        case Family::lower_bound_concurrence: {
            double ta = trace_norm(partial_transpose(rho, {da, db}, {0}));
            double re = realign_trace_norm(rho, da, db);
            double mm = static_cast<double>(std::min(da, db));
            double raw = std::sqrt(2.0 / (mm * (mm - 1.0))) * (std::max(ta, re) - 1.0);
            r.value = std::max(0.0, raw);
            r.method = "bound_lower";
            r.metadata["pt_trace_norm"] = ta;
            r.metadata["realign_trace_norm"] = re;
            r.metadata["raw_bound"] = raw;
            return r;
        }
        case Family::lower_bound_q_concurrence: {
            double q = m_double(m, "q");
            if (q <= 1.0) throw validation_error(m_err(m, "needs q > 1"));
            double ta = trace_norm(partial_transpose(rho, {da, db}, {0}));
            double re = realign_trace_norm(rho, da, db);
            double mm = static_cast<double>(std::min(da, db));
            double best = std::max(std::pow(ta, q - 1.0), std::pow(re, q - 1.0));
            double raw = best <= 1.0 ? 0.0
                                     : (best - 1.0) * (best - 1.0) /
                                           (std::pow(mm, 2.0 * q - 2.0) - std::pow(mm, q - 1.0));
            r.value = raw;
            r.method = "bound_lower";
            r.metadata["pt_trace_norm"] = ta;
            r.metadata["realign_trace_norm"] = re;
            return r;
        }
        case Family::lower_bound_alpha_concurrence: {
            double a = m_double(m, "alpha");
            if (a <= 0.0 || a >= 1.0) throw validation_error(m_err(m, "needs 0 < alpha < 1"));
            double ta = trace_norm(partial_transpose(rho, {da, db}, {0}));
            double re = realign_trace_norm(rho, da, db);
            double mm = static_cast<double>(std::min(da, db));
            double raw = std::pow(mm, 1.0 - a) / (mm - 1.0) * (std::max(ta, re) - 1.0);
            r.value = std::max(0.0, raw);
            r.method = "bound_lower";
            r.metadata["pt_trace_norm"] = ta;
            r.metadata["realign_trace_norm"] = re;
            r.metadata["raw_bound"] = raw;
            return r;
        }
        case Family::reduced:
            break;
    }
    throw std::logic_error("unreachable measure family");
}

MeasureResult bipartite_measure(const MeasureSpec& m, const MultipartiteState& s,
                                const std::vector<std::size_t>& side_a) {
    std::size_t n = s.dims.size();
    std::vector<std::size_t> a = side_a;
    std::sort(a.begin(), a.end());
    if (a.empty() || std::adjacent_find(a.begin(), a.end()) != a.end() || a.back() >= n ||
        a.size() >= n)
        throw validation_error(m_err(m, "cut must be a nonempty proper subsystem subset"));
    std::vector<std::size_t> order = a;
    for (std::size_t i = 0; i < n; ++i)
        if (!std::binary_search(a.begin(), a.end(), i)) order.push_back(i);
    std::size_t da = 1;
    for (std::size_t p : a) da *= s.dims[p];
    std::size_t db = s.total_dim() / da;
    if (s.pure) return pure_measure(m, permute_ket(s.amplitudes, s.dims, order), da, db);
    return mixed_measure(m, permute_density(s.rho, s.dims, order), da, db);
}

}  // namespace entkit
