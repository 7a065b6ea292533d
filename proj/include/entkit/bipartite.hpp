#pragma once

#include <map>
#include <string>
#include <vector>

#include "entkit/reduced_fn.hpp"
#include "entkit/states.hpp"

#include <json.hpp>

namespace entkit {

// Parsed form of the measure mini-language: "family[:key=value,...]",
// e.g. "tsallis:q=2" or "k_em:policy=min,h=tangle,k=3".
struct MeasureSpec {
    std::string family;
    std::map<std::string, std::string> params;
};

MeasureSpec parse_measure_spec(const std::string& text);

struct MeasureResult {
    double value = 0.0;
    std::string method;  // closed_form | reduced_fn | bound_lower | optimized
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

// --- closed forms

double binary_entropy(double x);
double eof_from_concurrence(double c);

double wootters_concurrence(const ComplexMatrix& rho);  // two-qubit
double two_qubit_eof_value(const ComplexMatrix& rho);
double two_qubit_tangle_value(const ComplexMatrix& rho);

// Negativity of a da x db density operator: sum of the negative partial
// transpose eigenvalues; exactly 0 when the partial transpose is positive.
double negativity_value(const ComplexMatrix& rho, std::size_t da, std::size_t db);
double log_negativity_value(const ComplexMatrix& rho, std::size_t da, std::size_t db);

double werner_eof_value(double x, std::size_t m);      // x = antisymmetric weight
double isotropic_eof_value(double f, std::size_t m);   // f = max-entangled fidelity

// Verstraete-style bounds: lower <= 2N <= C for two-qubit states.
struct SandwichResult {
    double lower = 0.0;
    double twice_negativity = 0.0;
    double concurrence = 0.0;
    bool holds = false;
};
SandwichResult assistance_upper_sandwich(const ComplexMatrix& rho);

// --- measure evaluation
//
// The ket/density is laid out with side A as the leading factor. Measures
// whose mixed-state value needs an optimizer reject density input here; the
// convex-roof module handles those.
MeasureResult pure_measure(const MeasureSpec& m, const std::vector<cx>& ket, std::size_t da,
                           std::size_t db);
MeasureResult mixed_measure(const MeasureSpec& m, const ComplexMatrix& rho, std::size_t da,
                            std::size_t db);

// Evaluates across the cut side_a | rest (0-based subsystem indices).
MeasureResult bipartite_measure(const MeasureSpec& m, const MultipartiteState& s,
                                const std::vector<std::size_t>& side_a);

// True when the family's pure-state value is induced by a reduced function,
// so a mixed state can be handled by the convex-roof optimizer. Fills fn.
bool measure_reduced_fn(const MeasureSpec& m, ReducedFn& fn);

}  // namespace entkit
