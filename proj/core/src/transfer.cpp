#include <cwl/transfer.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include <cwl/errors.hpp>
#include <cwl/expsum.hpp>
#include <cwl/io.hpp>
#include <cwl/parallel.hpp>

namespace cwl {

using Complex = std::complex<double>;
using Terms = std::vector<std::pair<Complex, Complex>>;

std::pair<Complex, Complex> characteristic_roots(ModelKind kind, double beta,
                                                 Complex lambda) {
    if (kind == ModelKind::DirichletDirichlet && lambda == Complex(0.0, 0.0)) {
        throw InvalidParams("lambda must be nonzero for the clamped-clamped kind");
    }
    Complex disc = beta * beta * lambda * lambda / 4.0 + lambda * lambda;
    if (kind == ModelKind::NeumannDirichlet) disc += 1.0;
    const Complex root = std::sqrt(disc);
    const Complex r1 = beta * lambda / 2.0 + root;
    const Complex r2 = beta * lambda / 2.0 - root;
    if (std::abs(r1 - r2) < 1e-12 * (1.0 + std::abs(r1))) {
        throw CoincidentRoots("characteristic roots coincide at this lambda");
    }
    return {r1, r2};
}

namespace {

// coeff * cosh(a) * sinh(b) * exp(c), expanded into four exponential terms.
void push_cosh_sinh_exp(Terms& terms, Complex coeff, Complex a, Complex b,
                        Complex c) {
    terms.push_back({0.25 * coeff, a + b + c});
    terms.push_back({-0.25 * coeff, a - b + c});
    terms.push_back({0.25 * coeff, -a + b + c});
    terms.push_back({-0.25 * coeff, -a - b + c});
}

// The clamped-clamped branch value for one coupling sign: the interface
// Green's value at xi with the drift e^{-lambda*b*xi} folded into every
// numerator exponent so the ratio is evaluated with a single shift.
Complex clamped_branch(double b, double xi, Complex lambda) {
    const auto [r1, r2] = characteristic_roots(ModelKind::DirichletDirichlet, b,
                                               lambda);
    const double s = std::sqrt(b * b + 4.0);
    const Complex drift = -lambda * b * xi;
    const Complex pref = 1.0 / (2.0 * s);
    Terms num;
    num.push_back({pref, r1 * (xi - 1.0) + r1 * xi + drift});
    num.push_back({-pref, r1 * (xi - 1.0) + r2 * xi + drift});
    num.push_back({-pref, r2 * (xi - 1.0) + r1 * xi + drift});
    num.push_back({pref, r2 * (xi - 1.0) + r2 * xi + drift});
    Terms den;
    den.push_back({1.0, -r2});
    den.push_back({-1.0, -r1});
    return scaled_ratio(scaled_exp_sum(num), scaled_exp_sum(den));
}

}  // namespace

TransferSample transfer_closed_form(const ModelConfig& cfg, Complex lambda) {
    validate(cfg);
    if (!(lambda.real() > 0.0)) {
        throw InvalidParams("transfer evaluation requires Re lambda > 0");
    }
    TransferSample out;
    out.lambda = lambda;
    out.method = TransferMethod::ClosedForm;

    if (cfg.kind == ModelKind::DirichletDirichlet) {
        out.H1 = clamped_branch(cfg.beta, cfg.xi, lambda);
        out.H2 = clamped_branch(-cfg.beta, cfg.xi, lambda);
        out.H = out.H1 + out.H2;
        return out;
    }

    const auto [r1, r2] =
        characteristic_roots(ModelKind::NeumannDirichlet, cfg.beta, lambda);
    const Complex pref = lambda / (2.0 * (r1 - r2));
    const double xi = cfg.xi;

    Terms den;
    den.push_back({0.25, r1 + r2});
    den.push_back({-0.25, r1 - r2});
    den.push_back({-0.25, r2 - r1});
    den.push_back({0.25, -r1 - r2});
    const ScaledExpSum den_sum = scaled_exp_sum(den);

    Terms num1;
    push_cosh_sinh_exp(num1, -1.0, r1 * (xi - 1.0), r2, r1 * xi);
    push_cosh_sinh_exp(num1, 1.0, r2 * (xi - 1.0), r1, r2 * xi);
    out.H1 = pref * scaled_ratio(scaled_exp_sum(num1), den_sum);

    Terms num2;
    push_cosh_sinh_exp(num2, -1.0, r1 * (xi - 1.0), r2, -r1 * xi);
    push_cosh_sinh_exp(num2, 1.0, r2 * (xi - 1.0), r1, -r2 * xi);
    out.H2 = pref * scaled_ratio(scaled_exp_sum(num2), den_sum);

    out.H = out.H1 + out.H2;
    return out;
}

namespace {

// Exponential basis function anchored at the interval end where its modulus
// peaks, so every basis value on the interval has modulus <= 1.
struct AnchoredExp {
    Complex r;
    double anchor;

    AnchoredExp(Complex root, double lo, double hi)
        : r(root), anchor(root.real() >= 0.0 ? hi : lo) {}

    Complex value(double x) const { return std::exp(r * (x - anchor)); }
    Complex deriv(double x) const { return r * value(x); }
};

Eigen::VectorXcd solve_matching(const Eigen::MatrixXcd& M,
                                const Eigen::VectorXcd& rhs) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU |
                                                  Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > 1e12) {
        throw SingularMatching("interface matching matrix condition exceeds 1e12");
    }
    return svd.solve(rhs);
}

// Interface matching for one clamped-clamped branch: psi(0)=psi(1)=0,
// [psi]=0 and [psi']=k at xi. Returns 0.5*lambda*psi(xi)/k.
Complex clamped_bvp_branch(double b, double xi, Complex lambda, double k) {
    const auto [r1, r2] = characteristic_roots(ModelKind::DirichletDirichlet, b,
                                               lambda);
    const AnchoredExp L1(r1, 0.0, xi), L2(r2, 0.0, xi);
    const AnchoredExp R1(r1, xi, 1.0), R2(r2, xi, 1.0);

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(4, 4);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(4);
    M(0, 0) = L1.value(0.0);
    M(0, 1) = L2.value(0.0);
    M(1, 2) = R1.value(1.0);
    M(1, 3) = R2.value(1.0);
    M(2, 0) = -L1.value(xi);
    M(2, 1) = -L2.value(xi);
    M(2, 2) = R1.value(xi);
    M(2, 3) = R2.value(xi);
    M(3, 0) = -L1.deriv(xi);
    M(3, 1) = -L2.deriv(xi);
    M(3, 2) = R1.deriv(xi);
    M(3, 3) = R2.deriv(xi);
    rhs(3) = k;

    const Eigen::VectorXcd u = solve_matching(M, rhs);
    return 0.5 * lambda * (u(0) * L1.value(xi) + u(1) * L2.value(xi)) / k;
}

}  // namespace

TransferSample transfer_numeric_bvp(const ModelConfig& cfg, Complex lambda,
                                    double k) {
    validate(cfg);
    if (!(lambda.real() > 0.0)) {
        throw InvalidParams("transfer evaluation requires Re lambda > 0");
    }
    if (k == 0.0 || !std::isfinite(k)) {
        throw InvalidParams("interface jump k must be nonzero and finite");
    }
    TransferSample out;
    out.lambda = lambda;
    out.method = TransferMethod::NumericBVP;

    if (cfg.kind == ModelKind::DirichletDirichlet) {
        out.H1 = clamped_bvp_branch(cfg.beta, cfg.xi, lambda, k);
        out.H2 = clamped_bvp_branch(-cfg.beta, cfg.xi, lambda, k);
        out.H = out.H1 + out.H2;
        return out;
    }

    // Coupled pair psi1 (roots r1, r2) and psi2 (roots -r1, -r2) with shared
    // free-end conditions (psi1+psi2)'=0 and (psi1-psi2)=0 at both ends, and
    // interface jumps [psi_i]=0, [psi_i']=k at xi.
    const auto [r1, r2] =
        characteristic_roots(ModelKind::NeumannDirichlet, cfg.beta, lambda);
    const double xi = cfg.xi;
    const Complex q1 = -r1, q2 = -r2;

    const AnchoredExp pL1(r1, 0.0, xi), pL2(r2, 0.0, xi);
    const AnchoredExp pR1(r1, xi, 1.0), pR2(r2, xi, 1.0);
    const AnchoredExp qL1(q1, 0.0, xi), qL2(q2, 0.0, xi);
    const AnchoredExp qR1(q1, xi, 1.0), qR2(q2, xi, 1.0);

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(8, 8);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(8);
    // columns: psi1 left (0,1), psi1 right (2,3), psi2 left (4,5), psi2 right (6,7)
    M(0, 0) = pL1.deriv(0.0);
    M(0, 1) = pL2.deriv(0.0);
    M(0, 4) = qL1.deriv(0.0);
    M(0, 5) = qL2.deriv(0.0);
    M(1, 0) = pL1.value(0.0);
    M(1, 1) = pL2.value(0.0);
    M(1, 4) = -qL1.value(0.0);
    M(1, 5) = -qL2.value(0.0);
    M(2, 2) = pR1.deriv(1.0);
    M(2, 3) = pR2.deriv(1.0);
    M(2, 6) = qR1.deriv(1.0);
    M(2, 7) = qR2.deriv(1.0);
    M(3, 2) = pR1.value(1.0);
    M(3, 3) = pR2.value(1.0);
    M(3, 6) = -qR1.value(1.0);
    M(3, 7) = -qR2.value(1.0);
    M(4, 0) = -pL1.value(xi);
    M(4, 1) = -pL2.value(xi);
    M(4, 2) = pR1.value(xi);
    M(4, 3) = pR2.value(xi);
    M(5, 0) = -pL1.deriv(xi);
    M(5, 1) = -pL2.deriv(xi);
    M(5, 2) = pR1.deriv(xi);
    M(5, 3) = pR2.deriv(xi);
    rhs(5) = k;
    M(6, 4) = -qL1.value(xi);
    M(6, 5) = -qL2.value(xi);
    M(6, 6) = qR1.value(xi);
    M(6, 7) = qR2.value(xi);
    M(7, 4) = -qL1.deriv(xi);
    M(7, 5) = -qL2.deriv(xi);
    M(7, 6) = qR1.deriv(xi);
    M(7, 7) = qR2.deriv(xi);
    rhs(7) = k;

    const Eigen::VectorXcd u = solve_matching(M, rhs);
    out.H1 = 0.5 * lambda * (u(0) * pL1.value(xi) + u(1) * pL2.value(xi)) / k;
    out.H2 = 0.5 * lambda * (u(4) * qL1.value(xi) + u(5) * qL2.value(xi)) / k;
    out.H = out.H1 + out.H2;
    return out;
}

VerticalLineScan vertical_line_sup(const ModelConfig& cfg, double gamma,
                                   double omega_max, int n_samples) {
    validate(cfg);
    if (!(gamma > 0.0)) throw InvalidParams("gamma must be positive");
    if (!(omega_max > 0.0)) throw InvalidParams("omega_max must be positive");
    if (n_samples < 100) throw InvalidParams("n_samples must be at least 100");

    VerticalLineScan scan;
    scan.gamma = gamma;
    scan.bound_H1 = transfer_line_bound(cfg, gamma);
    scan.samples.resize(static_cast<size_t>(n_samples));

    const double re = 2.0 * gamma;
    parallel_for(static_cast<size_t>(n_samples), [&](size_t i) {
        const double im = -omega_max + 2.0 * omega_max * static_cast<double>(i) /
                                           static_cast<double>(n_samples - 1);
        scan.samples[i] = transfer_closed_form(cfg, Complex(re, im));
    });

    for (const TransferSample& s : scan.samples) {
        scan.sup_H1 = std::max(scan.sup_H1, std::abs(s.H1));
        scan.sup_H2 = std::max(scan.sup_H2, std::abs(s.H2));
        if (std::abs(s.H) >= scan.sup_H) {
            scan.sup_H = std::abs(s.H);
            scan.argmax_lambda = s.lambda;
        }
    }
    return scan;
}

double transfer_line_bound(const ModelConfig& cfg, double gamma) {
    validate(cfg);
    if (!(gamma > 0.0)) throw InvalidParams("gamma must be positive");
    const double s = std::sqrt(cfg.beta * cfg.beta + 4.0);
    if (cfg.kind == ModelKind::DirichletDirichlet) {
        return std::cosh(gamma * s * (1.0 - cfg.xi)) * std::cosh(gamma * s * cfg.xi) /
               (s * std::sinh(gamma * s));
    }
    const double bp = cfg.beta + s;
    const double bm = s - cfg.beta;
    return std::cosh(gamma * (1.0 - cfg.xi) * bp) * std::cosh(gamma * bp) *
           std::exp(gamma * cfg.xi * bp) /
           (s * std::sinh(gamma * bp) * std::sinh(gamma * bm));
}

std::string scan_to_csv(const std::vector<TransferSample>& samples) {
    std::string out = "re_lambda,im_lambda,abs_H,abs_H1,abs_H2,method\n";
    for (const TransferSample& s : samples) {
        out += fmt17(s.lambda.real());
        out += ',';
        out += fmt17(s.lambda.imag());
        out += ',';
        out += fmt17(std::abs(s.H));
        out += ',';
        out += fmt17(std::abs(s.H1));
        out += ',';
        out += fmt17(std::abs(s.H2));
        out += ',';
        out += s.method == TransferMethod::ClosedForm ? "ClosedForm" : "NumericBVP";
        out += '\n';
    }
    return out;
}

}  // namespace cwl
