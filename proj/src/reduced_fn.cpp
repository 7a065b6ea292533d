#include "entkit/reduced_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "entkit/linalg.hpp"
#include "entkit/rng.hpp"
#include "entkit/states.hpp"

namespace entkit {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // 1/ln(2)
constexpr double kRankCut = 1e-10;             // eigenvalues above this count toward rank
constexpr std::size_t kMaxWitnesses = 16;

enum class Kind {
    s,
    h_c,
    h_tau,
    h_q,
    h_alpha,
    h_n,
    h_f,
    h_fp,
    h_af,
    h_2,
    h_min,
    h_minp,
    dual_entropy,
    kaniadakis,
    unified,
    c_k,
    g_d,
    total_concurrence,
    ic_measure,
};

Kind kind_of(const std::string& name) {
    static const std::map<std::string, Kind> table = {
        {"S", Kind::s},
        {"von_neumann", Kind::s},
        {"h_C", Kind::h_c},
        {"h_tau", Kind::h_tau},
        {"tangle", Kind::h_tau},
        {"h_q", Kind::h_q},
        {"tsallis", Kind::h_q},
        {"h_alpha", Kind::h_alpha},
        {"renyi", Kind::h_alpha},
        {"h_N", Kind::h_n},
        {"h_F", Kind::h_f},
        {"h_Fp", Kind::h_fp},
        {"h_F_prime", Kind::h_fp},
        {"h_AF", Kind::h_af},
        {"h_2", Kind::h_2},
        {"h_min", Kind::h_min},
        {"h_minp", Kind::h_minp},
        {"h_min_prime", Kind::h_minp},
        {"dual_entropy", Kind::dual_entropy},
        {"kaniadakis", Kind::kaniadakis},
        {"unified", Kind::unified},
        {"C_k", Kind::c_k},
        {"G_d", Kind::g_d},
        {"total_concurrence", Kind::total_concurrence},
        {"ic_measure", Kind::ic_measure},
    };
    auto it = table.find(name);
    if (it == table.end()) throw validation_error("unknown reduced function kind '" + name + "'");
    return it->second;
}

const std::string& canonical_name(Kind k) {
    static const std::map<Kind, std::string> table = {
        {Kind::s, "S"},
        {Kind::h_c, "h_C"},
        {Kind::h_tau, "h_tau"},
        {Kind::h_q, "h_q"},
        {Kind::h_alpha, "h_alpha"},
        {Kind::h_n, "h_N"},
        {Kind::h_f, "h_F"},
        {Kind::h_fp, "h_Fp"},
        {Kind::h_af, "h_AF"},
        {Kind::h_2, "h_2"},
        {Kind::h_min, "h_min"},
        {Kind::h_minp, "h_minp"},
        {Kind::dual_entropy, "dual_entropy"},
        {Kind::kaniadakis, "kaniadakis"},
        {Kind::unified, "unified"},
        {Kind::c_k, "C_k"},
        {Kind::g_d, "G_d"},
        {Kind::total_concurrence, "total_concurrence"},
        {Kind::ic_measure, "ic_measure"},
    };
    return table.at(k);
}

double param_or(const ReducedFn& fn, const std::string& key, double fallback) {
    auto it = fn.params.find(key);
    return it == fn.params.end() ? fallback : it->second;
}

bool has_param(const ReducedFn& fn, const std::string& key) {
    return fn.params.find(key) != fn.params.end();
}

double require_param(const ReducedFn& fn, const std::string& key) {
    auto it = fn.params.find(key);
    if (it == fn.params.end())
        throw validation_error("reduced function '" + fn.kind + "' needs parameter '" + key + "'");
    return it->second;
}

void check_param_keys(const ReducedFn& fn, std::initializer_list<const char*> allowed) {
    for (const auto& kv : fn.params) {
        bool known = false;
        for (const char* a : allowed)
            if (kv.first == a) {
                known = true;
                break;
            }
        if (!known)
            throw validation_error("reduced function '" + fn.kind + "' does not take parameter '" +
                                   kv.first + "'");
    }
}

std::size_t integer_param(const ReducedFn& fn, const std::string& key, double v) {
    if (v < 0.0 || std::abs(v - std::round(v)) > 1e-9)
        throw validation_error("reduced function '" + fn.kind + "' parameter '" + key +
                               "' must be a non-negative integer");
    return static_cast<std::size_t>(std::llround(v));
}

double sum_pow(const std::vector<double>& lam, double p) {
    double s = 0.0;
    for (double v : lam)
        if (v > 0.0) s += std::pow(v, p);
    return s;
}

double sum_sq(const std::vector<double>& lam) {
    double s = 0.0;
    for (double v : lam) s += v * v;
    return s;
}

// Product over i of (d-k+i) / (i*d) = C(d,k) / d^k.
double uniform_esym(std::size_t d, std::size_t k) {
    double out = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        out *= static_cast<double>(d - k + i) / (static_cast<double>(i) * static_cast<double>(d));
    return out;
}

// e_k of the spectrum, via the ascending-coefficient recurrence; all inputs
// are non-negative so there is no cancellation.
double elementary_symmetric(const std::vector<double>& lam, std::size_t k) {
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    std::size_t filled = 0;
    for (double v : lam) {
        ++filled;
        std::size_t top = std::min(filled, k);
        for (std::size_t j = top; j >= 1; --j) e[j] += v * e[j - 1];
    }
    return e[k];
}

double min_positive(const std::vector<double>& lam) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : lam)
        if (v > kRankCut && v < m) m = v;
    return std::isfinite(m) ? m : 0.0;
}

std::size_t rank_of(const std::vector<double>& lam) {
    std::size_t r = 0;
    for (double v : lam)
        if (v > kRankCut) ++r;
    return r;
}

double eval_kind(Kind kind, const ReducedFn& fn, const std::vector<double>& lam) {
    std::size_t d = lam.size();
    switch (kind) {
        case Kind::s: {
            bool nats = param_or(fn, "nats", 0.0) != 0.0;
            double s = 0.0;
            for (double v : lam)
                if (v > 0.0) s -= v * std::log(v);
            return nats ? s : s * kLog2E;
        }
        case Kind::h_c:
            return std::sqrt(std::max(0.0, 2.0 * (1.0 - sum_sq(lam))));
        case Kind::h_tau:
            return 2.0 * (1.0 - sum_sq(lam));
        case Kind::h_q: {
            double q = require_param(fn, "q");
            return (1.0 - sum_pow(lam, q)) / (q - 1.0);
        }
        case Kind::h_alpha: {
            double a = require_param(fn, "alpha");
            bool nats = param_or(fn, "nats", 0.0) != 0.0;
            double t = std::log(sum_pow(lam, a)) / (1.0 - a);
            return nats ? t : t * kLog2E;
        }
        case Kind::h_n: {
            double s = sum_pow(lam, 0.5);
            return 0.5 * (s * s - 1.0);
        }
        case Kind::h_f:
            return 1.0 - sum_pow(lam, 3.0);
        case Kind::h_fp: {
            double p = sum_sq(lam);
            return 1.0 - p * p;
        }
        case Kind::h_af:
            return 1.0 - std::sqrt(sum_pow(lam, 3.0));
        case Kind::h_2: {
            double top = *std::max_element(lam.begin(), lam.end());
            double base = 1.0 - top;
            bool normalized = param_or(fn, "normalized", 1.0) != 0.0;
            if (!normalized || d < 2) return base;
            return base * static_cast<double>(d) / static_cast<double>(d - 1);
        }
        case Kind::h_min: {
            double m = min_positive(lam);
            return m < 1.0 - kRankCut ? m : 0.0;
        }
        case Kind::h_minp: {
            double m = min_positive(lam);
            if (m >= 1.0 - kRankCut) return 0.0;
            return m * static_cast<double>(rank_of(lam));
        }
        case Kind::dual_entropy: {
            if (d < 2) return 0.0;
            double s = 0.0;
            for (double v : lam) {
                if (v > 0.0) s -= v * std::log2(v);
                double w = 1.0 - v;
                if (w > 0.0) s -= w * std::log2(w);
            }
            double dd = static_cast<double>(d);
            double r = dd * std::log2(dd) - (dd - 1.0) * std::log2(dd - 1.0);
            return s / r;
        }
        case Kind::kaniadakis: {
            double k = require_param(fn, "kappa");
            return (sum_pow(lam, 1.0 - k) - sum_pow(lam, 1.0 + k)) / (2.0 * k);
        }
        case Kind::unified: {
            double q = require_param(fn, "q");
            double s = require_param(fn, "s");
            return (std::pow(sum_pow(lam, q), s) - 1.0) / ((1.0 - q) * s);
        }
        case Kind::c_k: {
            std::size_t k = integer_param(fn, "k", require_param(fn, "k"));
            if (k < 1 || k > d)
                throw validation_error("C_k needs 1 <= k <= dimension (" + std::to_string(d) + ")");
            double e = elementary_symmetric(lam, k);
            return std::pow(std::max(0.0, e) / uniform_esym(d, k), 1.0 / static_cast<double>(k));
        }
        case Kind::g_d: {
            double e = elementary_symmetric(lam, d);
            return std::pow(std::max(0.0, e) / uniform_esym(d, d), 1.0 / static_cast<double>(d));
        }
        case Kind::total_concurrence: {
            if (d < 2) return 0.0;
            double q = require_param(fn, "q");
            double dd = static_cast<double>(d);
            double mu = dd - std::pow(dd, 1.0 - q) * (1.0 + std::pow(dd - 1.0, q));
            double comp = 0.0;
            for (double v : lam) comp += std::pow(std::max(0.0, 1.0 - v), q);
            return (1.0 - sum_pow(lam, q) + (dd - 1.0) - comp) / mu;
        }
        case Kind::ic_measure: {
            std::size_t r = has_param(fn, "r") ? integer_param(fn, "r", require_param(fn, "r"))
                                               : (rank_of(lam) > 0 ? rank_of(lam) - 1 : 0);
            if (r > 60) throw validation_error("ic_measure parameter r is too large");
            double acc = 0.0;
            double binom = 1.0;
            for (std::size_t i = 0; i <= r; ++i) {
                if (i > 0) binom *= static_cast<double>(r - i + 1) / static_cast<double>(i);
                acc += binom * sum_pow(lam, static_cast<double>(i + 1));
            }
            return 1.0 - acc / std::pow(2.0, static_cast<double>(r));
        }
    }
    throw std::logic_error("unreachable reduced function kind");
}

ComplexMatrix random_trial_density(std::size_t dim, Rng& rng) {
    std::size_t rank = 1 + static_cast<std::size_t>(rng.raw() % dim);
    return random_density(dim, rank, rng);
}

void record_violation(ProbeReport& rep, ProbeWitness w) {
    ++rep.violation_count;
    if (rep.violations.size() < kMaxWitnesses) rep.violations.push_back(std::move(w));
}

void record_equality(ProbeReport& rep, ProbeWitness w) {
    if (rep.equality_witnesses.size() < kMaxWitnesses) rep.equality_witnesses.push_back(std::move(w));
}

void finish_report(ProbeReport& rep) {
    if (rep.violation_count > 0)
        rep.verdict = "violated";
    else if (!rep.equality_witnesses.empty())
        rep.verdict = "equality_witness_found";
    else
        rep.verdict = "consistent";
}

}  // namespace

ReducedFn make_reduced_fn(const std::string& kind, std::map<std::string, double> params) {
    ReducedFn fn;
    fn.params = std::move(params);
    Kind k = kind_of(kind);
    fn.kind = canonical_name(k);
    switch (k) {
        case Kind::s:
            check_param_keys(fn, {"nats"});
            break;
        case Kind::h_q: {
            check_param_keys(fn, {"q"});
            double q = require_param(fn, "q");
            if (q <= 0.0 || q == 1.0)
                throw validation_error("h_q needs q > 0, q != 1");
            break;
        }
        case Kind::h_alpha: {
            check_param_keys(fn, {"alpha", "nats"});
            double a = require_param(fn, "alpha");
            if (a <= 0.0 || a == 1.0)
                throw validation_error("h_alpha needs alpha > 0, alpha != 1");
            break;
        }
        case Kind::h_2:
            check_param_keys(fn, {"normalized"});
            break;
        case Kind::kaniadakis: {
            check_param_keys(fn, {"kappa"});
            double kp = require_param(fn, "kappa");
            if (kp <= 0.0 || kp > 1.0)
                throw validation_error("kaniadakis needs 0 < kappa <= 1");
            break;
        }
        case Kind::unified: {
            check_param_keys(fn, {"q", "s"});
            double q = require_param(fn, "q");
            double s = require_param(fn, "s");
            if (q <= 0.0 || q == 1.0 || s == 0.0)
                throw validation_error("unified needs q > 0, q != 1, s != 0");
            break;
        }
        case Kind::c_k: {
            check_param_keys(fn, {"k"});
            std::size_t kk = integer_param(fn, "k", require_param(fn, "k"));
            if (kk < 1) throw validation_error("C_k needs k >= 1");
            break;
        }
        case Kind::total_concurrence: {
            check_param_keys(fn, {"q"});
            double q = require_param(fn, "q");
            if (q < 2.0) throw validation_error("total_concurrence needs q >= 2");
            break;
        }
        case Kind::ic_measure:
            check_param_keys(fn, {"r"});
            if (has_param(fn, "r")) integer_param(fn, "r", require_param(fn, "r"));
            break;
        default:
            check_param_keys(fn, {});
            break;
    }
    return fn;
}

double eval_h_spectrum(const ReducedFn& fn, const std::vector<double>& spectrum) {
    if (spectrum.empty()) throw validation_error("empty spectrum");
    std::vector<double> lam(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        double v = spectrum[i];
        if (v < -1e-8)
            throw validation_error("spectrum entry " + std::to_string(v) + " is negative");
        lam[i] = v < 0.0 ? 0.0 : v;
    }
    return eval_kind(kind_of(fn.kind), fn, lam);
}

double eval_h(const ReducedFn& fn, const ComplexMatrix& rho) {
    return eval_h_spectrum(fn, hermitian_eigenvalues(rho));
}

double purity_of(const ComplexMatrix& rho) {
    if (!rho.square()) throw validation_error("purity needs a square matrix");
    double f = rho.frobenius_norm();
    return f * f;
}

ProbeReport concavity_probe(const ReducedFn& fn, const ProbeOptions& opts) {
    ProbeReport rep;
    rep.kind = fn.kind;
    rep.mode = "concavity";
    rep.min_gap = std::numeric_limits<double>::infinity();
    auto check = [&](const ComplexMatrix& r1, const ComplexMatrix& r2, double lam) {
        ComplexMatrix mix = r1 * cx{lam, 0.0} + r2 * cx{1.0 - lam, 0.0};
        double gap = eval_h(fn, mix) - lam * eval_h(fn, r1) - (1.0 - lam) * eval_h(fn, r2);
        rep.min_gap = std::min(rep.min_gap, gap);
        if (gap < -opts.violation_tol) {
            record_violation(rep, ProbeWitness{r1, r2, lam, gap});
        } else if (std::abs(gap) <= opts.equality_tol && r1.max_abs_diff(r2) >= opts.distance_min &&
                   std::min(lam, 1.0 - lam) >= 0.1) {
            record_equality(rep, ProbeWitness{r1, r2, lam, gap});
        }
        ++rep.trials;
    };
    for (const ProbeWitness& w : opts.crafted_pairs) check(w.rho1, w.rho2, w.lambda);
    for (std::size_t t = 0; t < opts.trials; ++t) {
        Rng rng(derive_seed(opts.seed, t));
        ComplexMatrix r1 = random_trial_density(opts.dim, rng);
        ComplexMatrix r2 = random_trial_density(opts.dim, rng);
        check(r1, r2, rng.uniform());
    }
    if (rep.trials == 0) rep.min_gap = 0.0;
    finish_report(rep);
    return rep;
}

ProbeReport subadditivity_probe(const ReducedFn& fn, const ProbeOptions& opts, bool superadditive) {
    ProbeReport rep;
    rep.kind = fn.kind;
    rep.mode = superadditive ? "superadditivity" : "subadditivity";
    rep.min_gap = std::numeric_limits<double>::infinity();
    std::size_t da = opts.dim, db = opts.dim_b;
    std::vector<std::size_t> dims = {da, db};
    auto check = [&](const ComplexMatrix& joint) {
        ComplexMatrix ra = partial_trace(joint, dims, {0});
        ComplexMatrix rb = partial_trace(joint, dims, {1});
        double sum = eval_h(fn, ra) + eval_h(fn, rb);
        double whole = eval_h(fn, joint);
        double gap = superadditive ? whole - sum : sum - whole;
        rep.min_gap = std::min(rep.min_gap, gap);
        if (gap < -opts.violation_tol) {
            record_violation(rep, ProbeWitness{joint, kron(ra, rb), 0.0, gap});
        } else if (std::abs(gap) <= opts.equality_tol) {
            record_equality(rep, ProbeWitness{joint, kron(ra, rb), 0.0, gap});
        }
        ++rep.trials;
    };
    for (const ComplexMatrix& j : opts.crafted_joint) check(j);
    for (std::size_t t = 0; t < opts.trials; ++t) {
        Rng rng(derive_seed(opts.seed, t));
        check(random_trial_density(da * db, rng));
    }
    if (rep.trials == 0) rep.min_gap = 0.0;
    finish_report(rep);
    return rep;
}

ProbeReport schur_concavity_probe(const ReducedFn& fn, const ProbeOptions& opts) {
    ProbeReport rep;
    rep.kind = fn.kind;
    rep.mode = "schur_concavity";
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < opts.trials; ++t) {
        Rng rng(derive_seed(opts.seed, t));
        std::vector<double> lam(opts.dim);
        double sum = 0.0;
        for (double& v : lam) {
            v = -std::log(1.0 - rng.uniform());
            sum += v;
        }
        for (double& v : lam) v /= sum;
        for (std::size_t step = 0; step < opts.chain_length; ++step) {
            std::size_t i = rng.raw() % opts.dim;
            std::size_t j = rng.raw() % opts.dim;
            if (i == j) j = (j + 1) % opts.dim;
            double tt = rng.uniform(0.5, 1.0);
            std::vector<double> next = lam;
            next[i] = tt * lam[i] + (1.0 - tt) * lam[j];
            next[j] = (1.0 - tt) * lam[i] + tt * lam[j];
            double gap = eval_h_spectrum(fn, next) - eval_h_spectrum(fn, lam);
            rep.min_gap = std::min(rep.min_gap, gap);
            ComplexMatrix before = ComplexMatrix::diagonal(lam);
            ComplexMatrix after = ComplexMatrix::diagonal(next);
            if (gap < -opts.violation_tol) {
                record_violation(rep, ProbeWitness{before, after, tt, gap});
            } else if (std::abs(gap) <= opts.equality_tol &&
                       before.max_abs_diff(after) >= opts.distance_min) {
                record_equality(rep, ProbeWitness{before, after, tt, gap});
            }
            ++rep.trials;
            lam = std::move(next);
        }
    }
    if (rep.trials == 0) rep.min_gap = 0.0;
    finish_report(rep);
    return rep;
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const cx& v : m.data()) data.push_back({v.real(), v.imag()});
    j["data"] = std::move(data);
    return j;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw validation_error("matrix JSON needs 'rows', 'cols', and 'data'");
    std::size_t rows = j["rows"].get<std::size_t>();
    std::size_t cols = j["cols"].get<std::size_t>();
    std::vector<cx> data;
    data.reserve(j["data"].size());
    for (const auto& e : j["data"]) {
        if (!e.is_array() || e.size() != 2)
            throw validation_error("matrix JSON 'data' entries must be [re, im] pairs");
        data.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return ComplexMatrix(rows, cols, std::move(data));
}

nlohmann::ordered_json probe_report_to_json(const ProbeReport& r) {
    nlohmann::ordered_json j;
    j["kind"] = r.kind;
    j["mode"] = r.mode;
    j["trials"] = r.trials;
    j["violation_count"] = r.violation_count;
    j["min_gap"] = r.min_gap;
    j["verdict"] = r.verdict;
    auto witness_array = [](const std::vector<ProbeWitness>& ws) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const ProbeWitness& w : ws) {
            nlohmann::ordered_json e;
            e["lambda"] = w.lambda;
            e["gap"] = w.gap;
            e["rho1"] = matrix_to_json(w.rho1);
            e["rho2"] = matrix_to_json(w.rho2);
            arr.push_back(std::move(e));
        }
        return arr;
    };
    j["violations"] = witness_array(r.violations);
    j["equality_witnesses"] = witness_array(r.equality_witnesses);
    return j;
}

}  // namespace entkit
