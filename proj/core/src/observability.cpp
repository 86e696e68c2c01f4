#include <cwl/observability.hpp>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include <cwl/errors.hpp>

namespace cwl {

double ingham_threshold(const ModelConfig& cfg) {
    validate(cfg);
    const double s = std::sqrt(cfg.beta * cfg.beta + 4.0);
    if (cfg.kind == ModelKind::DirichletDirichlet) return s;
    return (cfg.beta * cfg.beta + 4.0) / (cfg.beta + s);
}

namespace {

// int_0^T exp(D t) dt, with the series branch taking over when D T is small
// enough that expm1-style cancellation would cost digits.
std::complex<double> exp_integral(std::complex<double> D, double T) {
    const std::complex<double> z = D * T;
    if (std::abs(z) < 1e-4) {
        return T * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    }
    return (std::exp(z) - 1.0) / D;
}

}  // namespace

InghamResult ingham_ratio(const ModelConfig& cfg, const ModalState& state,
                          double T) {
    const double threshold = ingham_threshold(cfg);
    if (!(T > threshold)) {
        throw BelowInghamTime("T must exceed the window threshold " +
                              std::to_string(threshold));
    }
    const Eigen::Index len = state.a.size();
    if (state.lambda.size() != len || state.n.size() != len ||
        state.branch.size() != len) {
        throw FrequencyMismatch("modal bundle vectors disagree in length");
    }

    Eigen::VectorXcd weight(len);
    for (Eigen::Index j = 0; j < len; ++j) {
        weight(j) = state.a(j) * state.lambda(j) *
                    trace_coefficient(cfg, state.n(j));
    }

    std::complex<double> integral = 0.0;
    double modal_sum = 0.0;
    for (Eigen::Index j = 0; j < len; ++j) {
        modal_sum += std::norm(weight(j));
        for (Eigen::Index k = 0; k < len; ++k) {
            const std::complex<double> D =
                state.lambda(j) + std::conj(state.lambda(k));
            integral += weight(j) * std::conj(weight(k)) * exp_integral(D, T);
        }
    }

    InghamResult out;
    out.T = T;
    out.integral = integral.real();
    out.modal_sum = modal_sum;
    out.ratio = modal_sum > 0.0 ? out.integral / modal_sum : 0.0;
    return out;
}

ModalInfimum modal_infimum(const ModelConfig& cfg, int N_scan) {
    validate(cfg);
    if (N_scan < 1) throw InvalidParams("N_scan must be at least 1");
    ModalInfimum out;
    out.value = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= N_scan; ++n) {
        const double c = std::abs(trace_coefficient(cfg, n));
        if (c < out.value) {
            out.value = c;
            out.argmin_n = n;
        }
    }
    return out;
}

CriterionVerdict stability_criterion(double xi, std::int64_t denom_cap,
                                     double tol) {
    if (!(xi > 0.0 && xi < 1.0)) throw InvalidParams("xi must lie in (0, 1)");
    if (denom_cap < 2) throw InvalidParams("denom_cap must be at least 2");
    if (!(tol > 0.0)) throw InvalidParams("tol must be positive");

    CriterionVerdict v;
    v.xi = xi;
    v.denom_cap = denom_cap;
    v.tol = tol;

    // Continued-fraction convergents h/k of xi; each is automatically in
    // lowest terms, so the first one within tol and under the cap is the
    // detected coprime factorisation.
    std::int64_t h_prev = 1, k_prev = 0;
    std::int64_t h = 0, k = 1;
    double x = xi;
    for (int iter = 0; iter < 64; ++iter) {
        if (k > denom_cap) break;
        if (std::abs(xi - static_cast<double>(h) / static_cast<double>(k)) <=
            tol) {
            v.rational = true;
            v.p = h;
            v.q = k;
            break;
        }
        const double frac = x - std::floor(x);
        if (!(frac > 0.0)) break;
        x = 1.0 / frac;
        const double a_real = std::floor(x);
        if (a_real * static_cast<double>(k) + static_cast<double>(k_prev) >
            4e18) {
            break;
        }
        const std::int64_t a = static_cast<std::int64_t>(a_real);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    v.paper_rule = v.rational && (v.p % 2 != 0);

    std::int64_t n_scan = v.rational ? 10 * v.q : 10 * denom_cap;
    n_scan = std::clamp<std::int64_t>(n_scan, 10, 1000000);
    const double pi = std::numbers::pi;
    double inf = std::numeric_limits<double>::infinity();
    int argmin = 0;
    for (std::int64_t n = 1; n <= n_scan; ++n) {
        const double c = std::abs(std::cos(static_cast<double>(n) * pi * xi));
        if (c < inf) {
            inf = c;
            argmin = static_cast<int>(n);
        }
    }
    v.modal_infimum = inf;
    v.argmin_n = argmin;
    return v;
}

std::string verdict_to_json(const CriterionVerdict& v) {
    nlohmann::json j;
    j["xi"] = v.xi;
    j["rational"] = v.rational;
    j["p"] = v.p;
    j["q"] = v.q;
    j["paper_rule"] = v.paper_rule;
    j["modal_infimum"] = v.modal_infimum;
    j["argmin_n"] = v.argmin_n;
    j["denom_cap"] = v.denom_cap;
    j["tol"] = v.tol;
    return j.dump();
}

}  // namespace cwl
