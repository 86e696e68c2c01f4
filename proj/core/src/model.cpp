#include <cwl/model.hpp>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include <cwl/errors.hpp>

namespace cwl {

namespace {
constexpr double kPi = std::numbers::pi;
}

void validate(const ModelConfig& cfg) {
    if (cfg.kind != ModelKind::DirichletDirichlet &&
        cfg.kind != ModelKind::NeumannDirichlet) {
        throw InvalidParams("unknown model kind");
    }
    if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) {
        throw InvalidParams("beta must lie in [0, 1)");
    }
    if (!(cfg.xi > 0.0 && cfg.xi < 1.0)) {
        throw InvalidParams("xi must lie in (0, 1)");
    }
    if (cfg.N < 2) {
        throw InvalidParams("truncation order N must be at least 2");
    }
}

Eigen::VectorXd point_control_vector(const ModelConfig& cfg) {
    validate(cfg);
    if (cfg.kind == ModelKind::DirichletDirichlet) {
        Eigen::VectorXd b(cfg.N);
        for (int n = 1; n <= cfg.N; ++n) {
            b(n - 1) = std::sqrt(2.0) * std::sin(n * kPi * cfg.xi);
        }
        return b;
    }
    Eigen::VectorXd b(cfg.N + 1);
    b(0) = 1.0;
    for (int n = 1; n <= cfg.N; ++n) {
        b(n) = std::sqrt(2.0) * std::cos(n * kPi * cfg.xi);
    }
    return b;
}

ModalModel assemble_model(const ModelConfig& cfg) {
    validate(cfg);
    ModalModel m;
    m.cfg = cfg;
    m.evalB = point_control_vector(cfg);

    if (cfg.kind == ModelKind::DirichletDirichlet) {
        const int N = cfg.N;
        m.basis1 = BasisFamily::Sine;
        m.basis2 = BasisFamily::Sine;
        m.couplingExact = false;

        m.quad.dims = {N, N, 1};
        Eigen::VectorXd diag(N);
        for (int n = 1; n <= N; ++n) diag(n - 1) = (n * kPi) * (n * kPi);
        m.quad.A1 = diag.asDiagonal();
        m.quad.A2 = diag.asDiagonal();
        m.quad.B = m.evalB;

        // Galerkin projection of the first-derivative coupling onto the sine
        // basis: nonzero only between modes of opposite parity.
        m.quad.C = Eigen::MatrixXd::Zero(N, N);
        for (int r = 1; r <= N; ++r) {
            for (int c = 1; c <= N; ++c) {
                if ((r + c) % 2 == 1) {
                    m.quad.C(r - 1, c - 1) = 4.0 * cfg.beta * r * c /
                                             (double(r) * r - double(c) * c);
                }
            }
        }
        return m;
    }

    const int N = cfg.N;
    m.basis1 = BasisFamily::CosineWithConstant;
    m.basis2 = BasisFamily::Sine;
    m.couplingExact = true;

    m.quad.dims = {N + 1, N, 1};
    Eigen::VectorXd d1(N + 1);
    for (int n = 0; n <= N; ++n) d1(n) = (n * kPi) * (n * kPi) + 1.0;
    Eigen::VectorXd d2(N);
    for (int n = 1; n <= N; ++n) d2(n - 1) = (n * kPi) * (n * kPi) + 1.0;
    m.quad.A1 = d1.asDiagonal();
    m.quad.A2 = d2.asDiagonal();
    m.quad.B = m.evalB;

    // d/dx maps sin(n pi x) to n pi cos(n pi x): the coupling is one-band
    // and carries no projection error at any truncation order.
    m.quad.C = Eigen::MatrixXd::Zero(N + 1, N);
    for (int n = 1; n <= N; ++n) m.quad.C(n, n - 1) = cfg.beta * n * kPi;
    return m;
}

std::complex<double> dressed_frequency(ModelKind kind, double beta, int n, int branch) {
    const double s = std::sqrt(beta * beta + 4.0);
    if (kind == ModelKind::DirichletDirichlet) {
        return {0.0, 2.0 * n * kPi / s};
    }
    if (branch != 1 && branch != -1) {
        throw InvalidParams("branch must be +1 or -1");
    }
    const double s2 = s * s;
    const double D = 2.0 * n * kPi * beta / s2;
    const double E = std::sqrt(4.0 * n * n * kPi * kPi * beta * beta / (s2 * s2) +
                               (4.0 + 4.0 * n * n * kPi * kPi) / s2);
    return {0.0, D + branch * E};
}

ModalState adjoint_frequencies(const ModelConfig& cfg) {
    validate(cfg);
    ModalState st;
    if (cfg.kind == ModelKind::DirichletDirichlet) {
        const int count = 2 * cfg.N;
        st.a = Eigen::VectorXcd::Zero(count);
        st.lambda.resize(count);
        st.n.resize(count);
        st.branch = Eigen::VectorXi::Zero(count);
        int k = 0;
        for (int n = 1; n <= cfg.N; ++n) {
            for (int sign : {1, -1}) {
                st.n(k) = sign * n;
                st.lambda(k) = dressed_frequency(cfg.kind, cfg.beta, sign * n, 0);
                ++k;
            }
        }
        return st;
    }
    const int count = 4 * cfg.N + 2;
    st.a = Eigen::VectorXcd::Zero(count);
    st.lambda.resize(count);
    st.n.resize(count);
    st.branch.resize(count);
    int k = 0;
    auto put = [&](int n, int branch) {
        st.n(k) = n;
        st.branch(k) = branch;
        st.lambda(k) = dressed_frequency(cfg.kind, cfg.beta, n, branch);
        ++k;
    };
    put(0, 1);
    put(0, -1);
    for (int n = 1; n <= cfg.N; ++n) {
        put(n, 1);
        put(n, -1);
        put(-n, 1);
        put(-n, -1);
    }
    return st;
}

double trace_coefficient(const ModelConfig& cfg, int n) {
    validate(cfg);
    if (cfg.kind == ModelKind::DirichletDirichlet) {
        const double s = std::sqrt(cfg.beta * cfg.beta + 4.0);
        return std::cos(n * cfg.beta * kPi * cfg.xi / s) * std::sin(n * kPi * cfg.xi);
    }
    return std::cos(n * kPi * cfg.xi);
}

std::complex<double> adjoint_trace(const ModelConfig& cfg, const ModalState& state,
                                   double t) {
    validate(cfg);
    const Eigen::Index len = state.a.size();
    if (state.lambda.size() != len || state.n.size() != len ||
        state.branch.size() != len) {
        throw FrequencyMismatch("modal bundle vectors disagree in length");
    }
    const double band = 4.0 * (cfg.N + 1) * kPi;
    std::complex<double> sum = 0.0;
    for (Eigen::Index j = 0; j < len; ++j) {
        const std::complex<double> l = state.lambda(j);
        if (std::abs(l.real()) > 1e-9 * std::abs(l)) {
            throw FrequencyMismatch("frequency " + std::to_string(j) +
                                    " is not purely imaginary");
        }
        if (std::abs(l.imag()) > band) {
            throw FrequencyMismatch("frequency " + std::to_string(j) +
                                    " lies outside the model band");
        }
        sum += state.a(j) * l * std::exp(l * t) * trace_coefficient(cfg, state.n(j));
    }
    return sum;
}

std::string model_config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["kind"] = cfg.kind == ModelKind::DirichletDirichlet ? "dirichlet" : "mixed";
    j["beta"] = cfg.beta;
    j["xi"] = cfg.xi;
    j["N"] = cfg.N;
    return j.dump();
}

ModelConfig model_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model config JSON: ") + e.what());
    }
    try {
        ModelConfig cfg;
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "dirichlet") {
            cfg.kind = ModelKind::DirichletDirichlet;
        } else if (kind == "mixed") {
            cfg.kind = ModelKind::NeumannDirichlet;
        } else {
            throw ParseError("model config JSON: kind must be 'dirichlet' or 'mixed'");
        }
        cfg.beta = j.at("beta").get<double>();
        cfg.xi = j.at("xi").get<double>();
        cfg.N = j.at("N").get<int>();
        if (!std::isfinite(cfg.beta) || !std::isfinite(cfg.xi)) {
            throw ParseError("model config JSON: non-finite parameter");
        }
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model config JSON: ") + e.what());
    }
}

}  // namespace cwl
