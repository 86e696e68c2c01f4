#pragma once

#include <cstdint>
#include <string>

#include <cwl/model.hpp>

namespace cwl {

struct InghamResult {
    double T = 0.0;
    double integral = 0.0;   // int_0^T |trace velocity|^2 dt, exact pairwise form
    double modal_sum = 0.0;  // sum_j |lambda_j a_j c_j|^2
    double ratio = 0.0;      // integral / modal_sum
};

// Horizon threshold above which the trace-norm equivalence window applies:
// sqrt(beta^2+4) for DirichletDirichlet,
// (beta^2+4)/(beta+sqrt(beta^2+4)) for NeumannDirichlet.
double ingham_threshold(const ModelConfig& cfg);

// Computes the observability functional in closed form: the integral expands
// into pairwise cross terms int_0^T exp((lambda_j + conj(lambda_k)) t) dt,
// each integrated exactly. Requires T > ingham_threshold(cfg); throws
// BelowInghamTime otherwise.
InghamResult ingham_ratio(const ModelConfig& cfg, const ModalState& state, double T);

struct ModalInfimum {
    double value = 0.0;
    int argmin_n = 0;
};

// min over 1 <= n <= N_scan of the trace-coefficient magnitude |c_n|.
ModalInfimum modal_infimum(const ModelConfig& cfg, int N_scan);

struct CriterionVerdict {
    double xi = 0.0;
    bool rational = false;
    std::int64_t p = 0;
    std::int64_t q = 0;
    bool paper_rule = false;  // rational with odd numerator
    double modal_infimum = 0.0;
    int argmin_n = 0;
    std::int64_t denom_cap = 0;
    double tol = 0.0;
};

// Detects xi ~ p/q (coprime, q <= denom_cap, |xi - p/q| <= tol) by
// continued-fraction convergents, applies the odd-numerator stability rule,
// and attaches the NeumannDirichlet modal infimum over n <= 10*q (clamped to
// [10, 1e6]; 10*denom_cap when no rational is detected) so the two stability
// signals stay visible side by side.
CriterionVerdict stability_criterion(double xi, std::int64_t denom_cap = 10000,
                                     double tol = 1e-9);

// JSON {xi, rational, p, q, paper_rule, modal_infimum, argmin_n, denom_cap, tol}.
std::string verdict_to_json(const CriterionVerdict& v);

}  // namespace cwl
