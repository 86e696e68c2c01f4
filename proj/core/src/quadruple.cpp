#include <cwl/quadruple.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include <json.hpp>

#include <cwl/errors.hpp>

namespace cwl {

namespace {

constexpr double kStructuralTol = 1e-10;

double symmetry_residual(const Eigen::MatrixXd& M) {
    const double scale = std::max(M.norm(), 1.0);
    return (M - M.transpose()).norm() / scale;
}

// Smallest eigenvalue relative to the largest magnitude one.
std::pair<double, double> min_eig_rel(const Eigen::MatrixXd& M) {
    const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    return {lo, hi > 0 ? lo / hi : lo};
}

Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    return es.eigenvectors() *
           es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

bool ValidationReport::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

ValidationReport validate_quadruple(const OperatorQuadruple& q) {
    ValidationReport rep;
    auto add = [&rep](const std::string& name, bool pass, double margin,
                      const std::string& detail) {
        rep.checks.push_back({name, pass, margin, detail});
    };

    const bool dims_ok =
        q.A1.rows() == q.dims.n1 && q.A1.cols() == q.dims.n1 &&
        q.A2.rows() == q.dims.n2 && q.A2.cols() == q.dims.n2 &&
        q.B.rows() == q.dims.n1 && q.B.cols() == q.dims.m &&
        q.C.rows() == q.dims.n1 && q.C.cols() == q.dims.n2 &&
        q.dims.n1 > 0 && q.dims.n2 > 0 && q.dims.m >= 0;
    add("dims_consistent", dims_ok, dims_ok ? 0.0 : -1.0,
        "matrix shapes match (n1, n2, m)");
    if (!dims_ok) return rep;

    const double s1 = symmetry_residual(q.A1);
    add("A1_symmetric", s1 <= kStructuralTol, kStructuralTol - s1,
        "relative symmetry residual of A1");
    const double s2 = symmetry_residual(q.A2);
    add("A2_symmetric", s2 <= kStructuralTol, kStructuralTol - s2,
        "relative symmetry residual of A2");

    const auto [lo1, rel1] = min_eig_rel(q.A1);
    add("A1_positive_definite", rel1 > kStructuralTol, rel1,
        "min eigenvalue of A1 = " + std::to_string(lo1));
    const auto [lo2, rel2] = min_eig_rel(q.A2);
    add("A2_positive_definite", rel2 > kStructuralTol, rel2,
        "min eigenvalue of A2 = " + std::to_string(lo2));

    if (rep.all_pass()) {
        // Bounded-extension norms of the coupling against each stiffness.
        const Eigen::MatrixXd c_a2 = q.C * inv_sqrt_spd(q.A2);
        const Eigen::MatrixXd ct_a1 = q.C.transpose() * inv_sqrt_spd(q.A1);
        rep.norm_C_A2_invsqrt =
            c_a2.size() ? c_a2.jacobiSvd().singularValues()(0) : 0.0;
        rep.norm_Ct_A1_invsqrt =
            ct_a1.size() ? ct_a1.jacobiSvd().singularValues()(0) : 0.0;
    }
    return rep;
}

void require_valid(const OperatorQuadruple& q) {
    const ValidationReport rep = validate_quadruple(q);
    for (const auto& c : rep.checks) {
        if (c.pass) continue;
        if (c.name == "dims_consistent") {
            throw DimensionMismatch("quadruple shapes inconsistent with dims");
        }
        if (c.name == "A1_symmetric") throw NotSymmetric("A1");
        if (c.name == "A2_symmetric") throw NotSymmetric("A2");
        if (c.name == "A1_positive_definite") throw NotPositiveDefinite("A1");
        if (c.name == "A2_positive_definite") throw NotPositiveDefinite("A2");
    }
}

DeltaEstimate estimate_delta(const OperatorQuadruple& q) {
    require_valid(q);
    const int n1 = q.dims.n1;
    const int n2 = q.dims.n2;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    S.topRightCorner(n1, n2) = 0.5 * q.C;
    S.bottomLeftCorner(n2, n1) = 0.5 * q.C.transpose();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    R.topLeftCorner(n1, n1) = q.A1 + q.C * q.C.transpose();
    R.bottomRightCorner(n2, n2).setIdentity();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> r_check(R);
    if (r_check.eigenvalues().minCoeff() <= 0.0) {
        throw SingularPencil("right-hand quadratic form is not positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(S, R);
    if (ges.info() != Eigen::Success) {
        throw SingularPencil("generalized eigensolver failed on the delta pencil");
    }
    DeltaEstimate out;
    out.delta_min = std::max(0.0, ges.eigenvalues().maxCoeff());
    out.admissible = out.delta_min < 0.5;
    return out;
}

OperatorQuadruple random_quadruple(SeededRng& rng, int n1, int n2, int m) {
    auto gaussian = [&rng](int r, int c) {
        Eigen::MatrixXd M(r, c);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) M(i, j) = rng.normal();
        }
        return M;
    };
    auto random_spd = [&](int n) {
        const Eigen::MatrixXd G = gaussian(n, n);
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        Eigen::MatrixXd Q = qr.householderQ();
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d(i) = rng.uniform(0.5, 5.0);
        return Eigen::MatrixXd(Q * d.asDiagonal() * Q.transpose());
    };

    OperatorQuadruple q;
    q.dims = {n1, n2, m};
    q.A1 = random_spd(n1);
    q.A2 = random_spd(n2);
    q.B = gaussian(n1, m) / std::sqrt(static_cast<double>(n1));
    q.C = gaussian(n1, n2) / std::sqrt(static_cast<double>(std::max(n1, n2)));
    return q;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, int rows, int cols,
                                 const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows) {
        throw ParseError(name + ": expected " + std::to_string(rows) + " rows");
    }
    Eigen::MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            throw ParseError(name + ": expected " + std::to_string(cols) +
                             " columns in row " + std::to_string(i));
        }
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                throw ParseError(name + ": non-numeric entry");
            }
            const double v = row[c].get<double>();
            if (!std::isfinite(v)) throw ParseError(name + ": non-finite entry");
            M(i, c) = v;
        }
    }
    return M;
}

}  // namespace

std::string quadruple_to_json(const OperatorQuadruple& q) {
    nlohmann::json j;
    j["n1"] = q.dims.n1;
    j["n2"] = q.dims.n2;
    j["m"] = q.dims.m;
    j["A1"] = matrix_to_json(q.A1);
    j["A2"] = matrix_to_json(q.A2);
    j["B"] = matrix_to_json(q.B);
    j["C"] = matrix_to_json(q.C);
    return j.dump();
}

OperatorQuadruple quadruple_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("quadruple JSON: ") + e.what());
    }
    try {
        OperatorQuadruple q;
        q.dims.n1 = j.at("n1").get<int>();
        q.dims.n2 = j.at("n2").get<int>();
        q.dims.m = j.at("m").get<int>();
        if (q.dims.n1 <= 0 || q.dims.n2 <= 0 || q.dims.m < 0) {
            throw ParseError("quadruple JSON: dims must be positive (m >= 0)");
        }
        q.A1 = matrix_from_json(j.at("A1"), q.dims.n1, q.dims.n1, "A1");
        q.A2 = matrix_from_json(j.at("A2"), q.dims.n2, q.dims.n2, "A2");
        q.B = matrix_from_json(j.at("B"), q.dims.n1, q.dims.m, "B");
        q.C = matrix_from_json(j.at("C"), q.dims.n1, q.dims.n2, "C");
        return q;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("quadruple JSON: ") + e.what());
    }
}

}  // namespace cwl
