#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <cwl/model.hpp>

namespace cwl {

enum class TransferMethod { ClosedForm, NumericBVP };

struct TransferSample {
    std::complex<double> lambda;
    std::complex<double> H1;
    std::complex<double> H2;
    std::complex<double> H;  // H1 + H2
    TransferMethod method;
};

// Roots of the interface characteristic polynomial
//   r^2 - beta*lambda*r - lambda^2       (DirichletDirichlet)
//   r^2 - beta*lambda*r - lambda^2 - 1   (NeumannDirichlet),
// r1 carrying the + branch. Throws CoincidentRoots when
// |r1 - r2| < 1e-12 (1 + |r1|).
std::pair<std::complex<double>, std::complex<double>>
characteristic_roots(ModelKind kind, double beta, std::complex<double> lambda);

// Closed-form transfer values H1, H2, H at lambda (Re lambda > 0), evaluated
// through scale-shifted exponential sums so large |lambda| cannot overflow
// intermediate terms. Throws CoincidentRoots / OverflowGuard / InvalidParams.
TransferSample transfer_closed_form(const ModelConfig& cfg, std::complex<double> lambda);

// Independent evaluation: solves the two-interval boundary-value problem with
// interface jump [psi'] = k by matching anchored exponential fundamental
// solutions, then normalizes by k (the result is k-independent). Throws
// SingularMatching when the matching matrix has condition > 1e12.
TransferSample transfer_numeric_bvp(const ModelConfig& cfg, std::complex<double> lambda,
                                    double k = 1.0);

struct VerticalLineScan {
    double gamma = 0.0;
    double sup_H = 0.0;
    double sup_H1 = 0.0;
    double sup_H2 = 0.0;
    std::complex<double> argmax_lambda;  // grid point where |H| peaks
    double bound_H1 = 0.0;               // closed-form line bound for |H1|
    std::vector<TransferSample> samples;
};

// Samples |H| on the vertical line Re lambda = 2*gamma over
// Im lambda in [-omega_max, omega_max] (n_samples >= 100 equispaced points)
// and reports the grid suprema together with the analytic line bound for H1.
VerticalLineScan vertical_line_sup(const ModelConfig& cfg, double gamma,
                                   double omega_max, int n_samples);

// The analytic bound for sup |H1| on Re lambda = 2*gamma; with s =
// sqrt(beta^2+4):
//   DirichletDirichlet: cosh(gamma s (1-xi)) cosh(gamma s xi) / (s sinh(gamma s))
//   NeumannDirichlet:   cosh(gamma (1-xi)(beta+s)) cosh(gamma (beta+s))
//                       e^{gamma xi (beta+s)} / (s sinh(gamma (beta+s)) sinh(gamma (s-beta)))
double transfer_line_bound(const ModelConfig& cfg, double gamma);

// CSV with header "re_lambda,im_lambda,abs_H,abs_H1,abs_H2,method".
std::string scan_to_csv(const std::vector<TransferSample>& samples);

}  // namespace cwl
