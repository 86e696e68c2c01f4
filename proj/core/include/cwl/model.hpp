#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include <cwl/quadruple.hpp>

namespace cwl {

// The two coupled-string models on (0,1) with pointwise velocity feedback at
// xi and first-derivative coupling of strength beta:
//  - DirichletDirichlet: both fields clamped at both ends; sine bases,
//    stiffness (n pi)^2, dense parity-sparse coupling matrix.
//  - NeumannDirichlet: first field free at both ends (cosine basis including
//    the constant mode, stiffness (n pi)^2 + 1), second field clamped (sine
//    basis, same stiffness); the coupling is exactly one-band.
enum class ModelKind { DirichletDirichlet, NeumannDirichlet };

struct ModelConfig {
    ModelKind kind = ModelKind::DirichletDirichlet;
    double beta = 0.0;  // coupling strength in [0, 1)
    double xi = 0.5;    // control/observation point in (0, 1)
    int N = 2;          // truncation order (highest mode per field)
};

void validate(const ModelConfig& cfg);  // throws InvalidParams

enum class BasisFamily { Sine, CosineWithConstant };

struct ModalModel {
    ModelConfig cfg;
    OperatorQuadruple quad;
    Eigen::VectorXd evalB;  // basis values at xi: the point-trace functional
    BasisFamily basis1;
    BasisFamily basis2;
    bool couplingExact;  // true when C is represented without projection error
};

ModalModel assemble_model(const ModelConfig& cfg);

// The point-trace vector alone (equals ModalModel::evalB).
Eigen::VectorXd point_control_vector(const ModelConfig& cfg);

// Modal bundle of a conservative closed-form solution: per entry an
// amplitude, a (purely imaginary) frequency, a signed mode number, and - for
// the NeumannDirichlet kind - the +-1 branch the frequency came from.
struct ModalState {
    Eigen::VectorXcd a;
    Eigen::VectorXcd lambda;
    Eigen::VectorXi n;
    Eigen::VectorXi branch;
};

// Closed-form conservative frequency for signed mode n. Pure formula (no
// truncation): DirichletDirichlet ignores branch; NeumannDirichlet takes
// branch = +-1. beta is not range-restricted here.
std::complex<double> dressed_frequency(ModelKind kind, double beta, int n, int branch);

// Every frequency of the truncated model (amplitudes zero-initialized):
// DirichletDirichlet n = +-1..+-N; NeumannDirichlet n = 0 and +-1..+-N with
// both branches.
ModalState adjoint_frequencies(const ModelConfig& cfg);

// Spatial trace coefficient c_n at xi for signed mode n.
double trace_coefficient(const ModelConfig& cfg, int n);

// Velocity trace sum_j a_j lambda_j exp(lambda_j t) c_{n_j} of the
// conservative closed-form solution. Throws FrequencyMismatch when a
// frequency is not purely imaginary or lies outside the model's band, or
// when the bundle's vectors disagree in length.
std::complex<double> adjoint_trace(const ModelConfig& cfg, const ModalState& state, double t);

// JSON document {kind: "dirichlet"|"mixed", beta, xi, N}.
std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& text);  // throws ParseError

}  // namespace cwl
