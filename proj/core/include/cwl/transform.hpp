#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include <cwl/quadruple.hpp>

namespace cwl {

// Change of variables between the coupled first-order system and its
// velocity-coupling-free conjugate, with its explicit inverse.
struct TransformPair {
    Eigen::MatrixXd P;
    Eigen::MatrixXd Pinv;
    double cond = 0.0;  // spectral condition number of P
};

// Assembled block stiffness of the conjugated second-order form, the extended
// control column, and the principal square roots used by the energy norms.
struct BlockSystem {
    Eigen::MatrixXd A;       // (n1+n2) x (n1+n2), symmetric positive definite
    Eigen::MatrixXd B0;      // (n1+n2) x m, zero rows in the second block
    Eigen::MatrixXd sqrtA1;
    Eigen::MatrixXd sqrtA2;
    Eigen::MatrixXd sqrtA;
};

enum class GeneratorKind { Coupled, Transformed, OpenLoopCoupled, OpenLoopTransformed };

// First-order 2(n1+n2) generator; state ordering is (positions, velocities)
// with both fields stacked inside each half.
struct FirstOrderGenerator {
    Eigen::MatrixXd M;
    GeneratorKind kind;
};

// Principal square root of a symmetric positive-definite matrix via
// symmetric eigendecomposition. Throws SqrtFailure.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& A, const std::string& name);

TransformPair build_transform(const OperatorQuadruple& q);

BlockSystem build_block_system(const OperatorQuadruple& q);

// (coupled kind, transformed kind); damping=false yields the open-loop pair
// with the rank-<=m velocity feedback removed.
std::pair<FirstOrderGenerator, FirstOrderGenerator>
build_generators(const OperatorQuadruple& q, bool damping);

// ||M_coupled - Pinv M_transformed P||_F / ||M_coupled||_F for the damped pair.
double conjugation_residual(const OperatorQuadruple& q);

struct TransferTriple {
    Eigen::MatrixXcd G1;          // B_ext^T (lambda - M_open)^{-1} B_ext
    Eigen::MatrixXcd G2;          // lambda B0^T (lambda^2 + A)^{-1} B0
    Eigen::MatrixXcd Gamma_form;  // lambda B^T [lambda^2 + A1 + lambda^2 C (lambda^2+A2)^{-1} C^T]^{-1} B
};

// Three independently computed forms of the open-loop transfer function;
// they agree for Re lambda > 0. Throws NearSingularResolvent when a solve
// residual exceeds 1e-6, InvalidParams when Re lambda <= 0.
TransferTriple transfer_resolvent_pair(const OperatorQuadruple& q,
                                       std::complex<double> lambda);

}  // namespace cwl
