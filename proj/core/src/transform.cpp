#include <cwl/transform.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include <cwl/errors.hpp>

namespace cwl {

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& A, const std::string& name) {
    if (A.rows() != A.cols()) {
        throw SqrtFailure(name + " is not square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
    if (es.info() != Eigen::Success) {
        throw SqrtFailure("eigendecomposition of " + name + " failed");
    }
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() <= 1e-14 * std::max(hi, 1.0)) {
        throw SqrtFailure(name + " is not positive definite");
    }
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

TransformPair build_transform(const OperatorQuadruple& q) {
    require_valid(q);
    const int n1 = q.dims.n1;
    const int n2 = q.dims.n2;
    const int n = n1 + n2;

    const Eigen::MatrixXd S = symmetric_sqrt(q.A2, "A2");
    const Eigen::MatrixXd Sinv = S.llt().solve(Eigen::MatrixXd::Identity(n2, n2));

    TransformPair tp;
    tp.P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    // Position block 1 is carried over unchanged; position block 2 becomes
    // S^{-1}(v2 - C^T w1); velocity block 1 carries over; velocity block 2
    // becomes -S w2.
    tp.P.block(0, 0, n1, n1).setIdentity();
    tp.P.block(n1, 0, n2, n1) = -Sinv * q.C.transpose();
    tp.P.block(n1, n + n1, n2, n2) = Sinv;
    tp.P.block(n, n, n1, n1).setIdentity();
    tp.P.block(n + n1, n1, n2, n2) = -S;

    tp.Pinv = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    tp.Pinv.block(0, 0, n1, n1).setIdentity();
    tp.Pinv.block(n1, n + n1, n2, n2) = -Sinv;
    tp.Pinv.block(n, n, n1, n1).setIdentity();
    tp.Pinv.block(n + n1, 0, n2, n1) = q.C.transpose();
    tp.Pinv.block(n + n1, n1, n2, n2) = S;

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(tp.P);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    tp.cond = smin > 0 ? svd.singularValues()(0) / smin
                       : std::numeric_limits<double>::infinity();
    return tp;
}

BlockSystem build_block_system(const OperatorQuadruple& q) {
    require_valid(q);
    const int n1 = q.dims.n1;
    const int n2 = q.dims.n2;
    const int n = n1 + n2;

    BlockSystem bs;
    bs.sqrtA1 = symmetric_sqrt(q.A1, "A1");
    bs.sqrtA2 = symmetric_sqrt(q.A2, "A2");

    bs.A = Eigen::MatrixXd::Zero(n, n);
    bs.A.topLeftCorner(n1, n1) = q.A1 + q.C * q.C.transpose();
    bs.A.topRightCorner(n1, n2) = q.C * bs.sqrtA2;
    bs.A.bottomLeftCorner(n2, n1) = bs.sqrtA2 * q.C.transpose();
    bs.A.bottomRightCorner(n2, n2) = q.A2;

    bs.B0 = Eigen::MatrixXd::Zero(n, q.dims.m);
    bs.B0.topRows(n1) = q.B;

    bs.sqrtA = symmetric_sqrt(bs.A, "block stiffness");
    return bs;
}

std::pair<FirstOrderGenerator, FirstOrderGenerator>
build_generators(const OperatorQuadruple& q, bool damping) {
    require_valid(q);
    const int n1 = q.dims.n1;
    const int n2 = q.dims.n2;
    const int n = n1 + n2;
    const double d = damping ? 1.0 : 0.0;
    const Eigen::MatrixXd S = symmetric_sqrt(q.A2, "A2");
    const Eigen::MatrixXd BBt = q.B * q.B.transpose();

    FirstOrderGenerator coupled;
    coupled.kind = damping ? GeneratorKind::Coupled : GeneratorKind::OpenLoopCoupled;
    coupled.M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    coupled.M.block(0, n, n, n).setIdentity();
    coupled.M.block(n, 0, n1, n1) = -q.A1;
    coupled.M.block(n + n1, n1, n2, n2) = -q.A2;
    coupled.M.block(n, n, n1, n1) = -d * BBt;
    coupled.M.block(n, n + n1, n1, n2) = -q.C;
    coupled.M.block(n + n1, n, n2, n1) = q.C.transpose();

    FirstOrderGenerator transformed;
    transformed.kind =
        damping ? GeneratorKind::Transformed : GeneratorKind::OpenLoopTransformed;
    transformed.M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    transformed.M.block(0, n, n, n).setIdentity();
    transformed.M.block(n, 0, n1, n1) = -(q.A1 + q.C * q.C.transpose());
    transformed.M.block(n, n1, n1, n2) = -q.C * S;
    transformed.M.block(n + n1, 0, n2, n1) = -S * q.C.transpose();
    transformed.M.block(n + n1, n1, n2, n2) = -q.A2;
    transformed.M.block(n, n, n1, n1) = -d * BBt;
    return {coupled, transformed};
}

double conjugation_residual(const OperatorQuadruple& q) {
    const auto [coupled, transformed] = build_generators(q, true);
    const TransformPair tp = build_transform(q);
    const double denom = std::max(coupled.M.norm(), 1e-300);
    return (tp.P * coupled.M - transformed.M * tp.P).norm() / denom;
}

namespace {

Eigen::MatrixXcd checked_solve(const Eigen::MatrixXcd& A,
                               const Eigen::MatrixXcd& rhs,
                               const char* what) {
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const Eigen::MatrixXcd X = lu.solve(rhs);
    const double denom = std::max(rhs.norm(), 1e-300);
    const double residual = (A * X - rhs).norm() / denom;
    if (!std::isfinite(residual) || residual > 1e-6) {
        throw NearSingularResolvent(std::string(what) + " solve residual " +
                                    std::to_string(residual));
    }
    return X;
}

}  // namespace

TransferTriple transfer_resolvent_pair(const OperatorQuadruple& q,
                                       std::complex<double> lambda) {
    if (!(lambda.real() > 0.0)) {
        throw InvalidParams("transfer evaluation requires Re lambda > 0");
    }
    require_valid(q);
    const int n1 = q.dims.n1;
    const int n2 = q.dims.n2;
    const int n = n1 + n2;
    const int m = q.dims.m;
    const std::complex<double> l2 = lambda * lambda;

    TransferTriple out;

    // Resolvent of the open-loop first-order generator against the extended
    // control column (rows are the first velocity block).
    const auto [open, open_t] = build_generators(q, false);
    (void)open_t;
    Eigen::MatrixXcd resolvent =
        lambda * Eigen::MatrixXcd::Identity(2 * n, 2 * n) -
        open.M.cast<std::complex<double>>();
    Eigen::MatrixXcd Bext = Eigen::MatrixXcd::Zero(2 * n, m);
    Bext.block(n, 0, n1, m) = q.B.cast<std::complex<double>>();
    const Eigen::MatrixXcd X1 = checked_solve(resolvent, Bext, "first-order resolvent");
    out.G1 = Bext.adjoint() * X1;

    // Second-order block form.
    const BlockSystem bs = build_block_system(q);
    Eigen::MatrixXcd K =
        l2 * Eigen::MatrixXcd::Identity(n, n) + bs.A.cast<std::complex<double>>();
    const Eigen::MatrixXcd B0c = bs.B0.cast<std::complex<double>>();
    const Eigen::MatrixXcd X2 = checked_solve(K, B0c, "block stiffness resolvent");
    out.G2 = lambda * B0c.adjoint() * X2;

    // Schur-reduced form over the first field only.
    const Eigen::MatrixXcd Ct = q.C.transpose().cast<std::complex<double>>();
    Eigen::MatrixXcd inner =
        l2 * Eigen::MatrixXcd::Identity(n2, n2) + q.A2.cast<std::complex<double>>();
    const Eigen::MatrixXcd Y = checked_solve(inner, Ct, "second-field resolvent");
    Eigen::MatrixXcd Gamma_inv = l2 * Eigen::MatrixXcd::Identity(n1, n1) +
                                 q.A1.cast<std::complex<double>>() +
                                 l2 * q.C.cast<std::complex<double>>() * Y;
    const Eigen::MatrixXcd Bc = q.B.cast<std::complex<double>>();
    const Eigen::MatrixXcd Z = checked_solve(Gamma_inv, Bc, "Schur complement");
    out.Gamma_form = lambda * Bc.adjoint() * Z;
    return out;
}

}  // namespace cwl
