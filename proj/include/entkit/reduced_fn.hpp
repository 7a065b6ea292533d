#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entkit/complex_matrix.hpp"

#include <json.hpp>

namespace entkit {

// A spectrum function h evaluated on density operators. Applied to the
// marginal of a pure state across a cut, each concave h induces an
// entanglement measure; the probes below check the claimed properties.
struct ReducedFn {
    std::string kind;
    std::map<std::string, double> params;
};

// Canonicalizes aliases (tsallis -> h_q, renyi -> h_alpha, ...) and validates
// parameter ranges. Throws validation_error on unknown kinds or bad params.
ReducedFn make_reduced_fn(const std::string& kind, std::map<std::string, double> params = {});

double eval_h(const ReducedFn& fn, const ComplexMatrix& rho);
// Spectrum entries may arrive in any order; tiny negatives are clipped.
double eval_h_spectrum(const ReducedFn& fn, const std::vector<double>& spectrum);

// Tr rho^2 for hermitian rho, without an eigendecomposition.
double purity_of(const ComplexMatrix& rho);

struct ProbeWitness {
    ComplexMatrix rho1;
    ComplexMatrix rho2;  // concavity: second mixing input; additivity: product of marginals
    double lambda = 0.0;
    double gap = 0.0;
};

struct ProbeOptions {
    std::size_t dim = 2;    // system dimension (first factor for additivity probes)
    std::size_t dim_b = 2;  // second factor (additivity probes)
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::size_t chain_length = 4;  // T-transform steps per trial
    double violation_tol = 1e-9;
    double equality_tol = 1e-9;
    double distance_min = 1e-3;  // equality witnesses must involve distinct inputs
    std::vector<ProbeWitness> crafted_pairs;   // extra concavity inputs, checked first
    std::vector<ComplexMatrix> crafted_joint;  // extra joint states for additivity probes
};

struct ProbeReport {
    std::string kind;
    std::string mode;
    std::size_t trials = 0;
    std::size_t violation_count = 0;
    std::vector<ProbeWitness> violations;          // capped exemplars
    std::vector<ProbeWitness> equality_witnesses;  // capped exemplars
    double min_gap = 0.0;
    std::string verdict;  // consistent | violated | equality_witness_found
};

// gap = h(lam*rho1 + (1-lam)*rho2) - lam*h(rho1) - (1-lam)*h(rho2);
// negative gap beyond tolerance is a concavity violation, near-zero gap on
// visibly distinct inputs witnesses non-strictness.
ProbeReport concavity_probe(const ReducedFn& fn, const ProbeOptions& opts);

// superadditive=false: gap = h(A) + h(B) - h(AB); superadditive=true: the
// reverse. Joint states are drawn on dim x dim_b.
ProbeReport subadditivity_probe(const ReducedFn& fn, const ProbeOptions& opts,
                                bool superadditive = false);

// Applies T-transform chains to random spectra; each step mixes the spectrum,
// so a Schur-concave h must not decrease.
ProbeReport schur_concavity_probe(const ReducedFn& fn, const ProbeOptions& opts);

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::ordered_json probe_report_to_json(const ProbeReport& r);

}  // namespace entkit
