#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <cwl/rng.hpp>

namespace cwl {

struct Dims {
    int n1 = 0;  // first-field state dimension
    int n2 = 0;  // second-field state dimension
    int m = 0;   // control dimension
};

// Finite-dimensional operator quadruple (A1, A2, B, C): two symmetric
// positive-definite stiffness blocks, a control-to-state map, and the
// velocity coupling between the fields.
struct OperatorQuadruple {
    Eigen::MatrixXd A1;  // n1 x n1
    Eigen::MatrixXd A2;  // n2 x n2
    Eigen::MatrixXd B;   // n1 x m
    Eigen::MatrixXd C;   // n1 x n2
    Dims dims;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // signed distance to the failure boundary
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    // Bounded-extension norms ||C A2^{-1/2}||_2 and ||C^T A1^{-1/2}||_2.
    double norm_C_A2_invsqrt = 0.0;
    double norm_Ct_A1_invsqrt = 0.0;
    bool all_pass() const;
};

// Symmetry / positivity / shape checks with numeric margins. Total: returns
// the report rather than throwing, so failures stay inspectable.
ValidationReport validate_quadruple(const OperatorQuadruple& q);

// Throws DimensionMismatch / NotSymmetric / NotPositiveDefinite (naming the
// offending matrix) when q fails validation. Operations whose precondition is
// a validated quadruple call this first.
void require_valid(const OperatorQuadruple& q);

struct DeltaEstimate {
    double delta_min = 0.0;
    bool admissible = false;  // delta_min < 1/2
};

// Smallest delta with |<x, C y>| <= delta * (||A1^{1/2}x||^2 + ||y||^2 +
// ||C^T x||^2) over all (x, y) != 0, certified as the top eigenvalue of the
// symmetric-definite pencil
//   [[0, C/2], [C^T/2, 0]] z = delta * [[A1 + C C^T, 0], [0, I]] z.
DeltaEstimate estimate_delta(const OperatorQuadruple& q);

// Random validated quadruple: A1, A2 are SPD with spectra in [0.5, 5], B and
// C have Gaussian entries scaled by 1/sqrt(dim).
OperatorQuadruple random_quadruple(SeededRng& rng, int n1, int n2, int m);

// JSON document {n1, n2, m, A1, A2, B, C} with row-major matrix arrays.
std::string quadruple_to_json(const OperatorQuadruple& q);
OperatorQuadruple quadruple_from_json(const std::string& text);  // throws ParseError

}  // namespace cwl
