#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "entkit/complex_matrix.hpp"
#include "entkit/rng.hpp"

#include <json.hpp>

namespace entkit {

// A ket or a density operator over a tensor product of finite subsystems.
// Subsystem indices are 0-based throughout the library; user-facing layers
// (CLI, partition text) translate from 1-based labels.
struct MultipartiteState {
    std::vector<std::size_t> dims;
    bool pure = true;
    std::vector<cx> amplitudes;  // row-major over dims, valid when pure
    ComplexMatrix rho;           // valid when !pure

    static MultipartiteState ket(std::vector<std::size_t> dims, std::vector<cx> amplitudes);
    static MultipartiteState density(std::vector<std::size_t> dims, ComplexMatrix rho);

    std::size_t total_dim() const;
    std::size_t parties() const { return dims.size(); }
    ComplexMatrix to_density() const;  // |psi><psi| for pure input
};

// Schmidt decomposition across a bipartition: amplitudes(i,k) =
// sum_r coeff_r * left(i,r) * right(k,r); coefficients descending,
// sum of squares 1 within 1e-10.
struct SchmidtForm {
    std::vector<double> coefficients;
    ComplexMatrix left;
    ComplexMatrix right;
    std::size_t rank = 0;  // count of coefficients with coeff^2 > 1e-10
};

// --- subsystem operations (0-based indices, kept subsystems keep their order)

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);
ComplexMatrix reduced_density(const MultipartiteState& s, const std::vector<std::size_t>& keep);
MultipartiteState reduced_state(const MultipartiteState& s, const std::vector<std::size_t>& keep);

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& transposed);

// Reorders tensor factors; order[k] names the original subsystem that lands
// at slot k. order must be a permutation of 0..n-1.
std::vector<cx> permute_ket(const std::vector<cx>& ket, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& order);
ComplexMatrix permute_density(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& order);

// Realignment of a bipartite density operator (da x db factors). The column
// form is the defining one; the row form is exposed because the two trace
// norms coincide and the tests pin that down.
ComplexMatrix realign(const ComplexMatrix& rho, std::size_t da, std::size_t db);
ComplexMatrix realign_row_form(const ComplexMatrix& rho, std::size_t da, std::size_t db);

SchmidtForm schmidt(const std::vector<cx>& ket, std::size_t da, std::size_t db);

// Purification on dims [d, rank(rho)]; tracing the ancilla back out
// reproduces rho within 1e-10.
MultipartiteState purify(const ComplexMatrix& rho);

std::vector<cx> random_pure(const std::vector<std::size_t>& dims, Rng& rng);  // Haar
ComplexMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng);    // Ginibre

// --- named state families and serialization

struct NamedStateSpec {
    std::string family;
    std::map<std::string, std::string> params;
};

NamedStateSpec parse_state_uri(const std::string& uri);  // "named:ghz?n=3&d=2"
MultipartiteState build_named(const NamedStateSpec& spec);

// Accepts a named: URI or a path to a JSON state file.
MultipartiteState load_state(const std::string& source);

nlohmann::ordered_json state_to_json(const MultipartiteState& s);
MultipartiteState state_from_json(const nlohmann::json& j);

// Analytic density constructions shared with the bipartite module.
ComplexMatrix werner_x_density(double x, std::size_t m);
ComplexMatrix werner_c_density(double c, std::size_t m);
ComplexMatrix isotropic_f_density(double f, std::size_t m);  // f = max-entangled fidelity
ComplexMatrix xstate_density(const std::vector<double>& a, const std::vector<double>& b,
                             const std::vector<cx>& z);

}  // namespace entkit
