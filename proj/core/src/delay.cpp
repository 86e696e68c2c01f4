#include <cwl/delay.hpp>

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <sstream>

#include <cwl/errors.hpp>
#include <cwl/io.hpp>
#include <cwl/transform.hpp>

namespace cwl {

void validate(const DelayParams& p) {
    if (!std::isfinite(p.alpha1) || !std::isfinite(p.alpha2) ||
        !std::isfinite(p.tau) || !std::isfinite(p.mu)) {
        throw InvalidParams("delay parameters must be finite");
    }
    if (p.tau <= 0.0) throw InvalidParams("tau must be positive");
    if (p.alpha2 < 0.0) throw InvalidParams("alpha2 must be nonnegative");
    if (p.alpha2 > p.alpha1) throw InvalidParams("alpha2 must not exceed alpha1");
    const auto [lo, hi] = delay_weight_bounds(p.alpha1, p.alpha2, p.tau);
    if (p.mu < lo || p.mu > hi) {
        throw InvalidParams("mu must lie in [tau*alpha2, tau*(2*alpha1 - alpha2)]");
    }
}

std::pair<double, double> delay_weight_bounds(double alpha1, double alpha2,
                                              double tau) {
    if (tau <= 0.0) throw InvalidParams("tau must be positive");
    if (alpha2 < 0.0) throw InvalidParams("alpha2 must be nonnegative");
    if (alpha2 > alpha1) throw InvalidParams("alpha2 must not exceed alpha1");
    return {tau * alpha2, tau * (2.0 * alpha1 - alpha2)};
}

namespace {

// Trapezoid of ||output||^2 over [t-tau, t]: half weights on the oldest ring
// sample and on the current output, full weights in between.
double history_quadrature(const std::vector<Eigen::VectorXd>& ring, int head,
                          const Eigen::VectorXd& y_cur, double dt) {
    const int L = static_cast<int>(ring.size());
    if (L == 0) return 0.0;
    double q = 0.5 * ring[head % L].squaredNorm() + 0.5 * y_cur.squaredNorm();
    for (int j = 1; j < L; ++j) q += ring[(head + j) % L].squaredNorm();
    return dt * q;
}

}  // namespace

SimResult simulate(const ModalModel& model, const DelayParams& params,
                   const SimInit& init, double dt, double T) {
    validate(model.cfg);
    validate(params);
    if (!(dt > 0.0) || !(T > 0.0)) {
        throw InvalidParams("dt and T must be positive");
    }
    const int n1 = model.quad.dims.n1;
    const int n2 = model.quad.dims.n2;
    const int n = n1 + n2;
    const int m = model.quad.dims.m;
    if (init.w0.size() != n || init.v0.size() != n) {
        throw DimensionMismatch("initial data must have n1 + n2 entries per field");
    }
    const long long L = std::llround(params.tau / dt);
    if (L < 1 || std::abs(static_cast<double>(L) * dt - params.tau) >
                     1e-9 * params.tau) {
        throw StepMismatch("tau must be a positive integer multiple of dt");
    }
    const long long nsteps = std::llround(T / dt);
    if (nsteps < 1) throw InvalidParams("T must cover at least one step");

    // Closed-loop generator with the instantaneous feedback folded in; the
    // delayed term is applied as an explicit forcing through the extended
    // control column.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    M.block(0, n, n, n).setIdentity();
    M.block(n, 0, n1, n1) = -model.quad.A1;
    M.block(n + n1, n1, n2, n2) = -model.quad.A2;
    M.block(n, n, n1, n1) = -params.alpha1 * model.quad.B * model.quad.B.transpose();
    M.block(n, n + n1, n1, n2) = -model.quad.C;
    M.block(n + n1, n, n2, n1) = model.quad.C.transpose();

    Eigen::MatrixXd Bext = Eigen::MatrixXd::Zero(2 * n, m);
    Bext.block(n, 0, n1, m) = model.quad.B;

    const Eigen::MatrixXd lhs =
        Eigen::MatrixXd::Identity(2 * n, 2 * n) - (dt / 2.0) * M;
    const Eigen::MatrixXd rhs_mat =
        Eigen::MatrixXd::Identity(2 * n, 2 * n) + (dt / 2.0) * M;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);

    const Eigen::MatrixXd sqrtA1 = symmetric_sqrt(model.quad.A1, "A1");
    const Eigen::MatrixXd sqrtA2 = symmetric_sqrt(model.quad.A2, "A2");
    const TransformPair tp = build_transform(model.quad);
    const BlockSystem bs = build_block_system(model.quad);

    Eigen::VectorXd z(2 * n);
    z.head(n) = init.w0;
    z.tail(n) = init.v0;

    std::vector<Eigen::VectorXd> ring(static_cast<size_t>(L));
    for (long long j = 0; j < L; ++j) {
        if (init.f0) {
            Eigen::VectorXd s = init.f0(-params.tau + static_cast<double>(j) * dt);
            if (s.size() != m) {
                throw DimensionMismatch("history sampler must return m entries");
            }
            ring[static_cast<size_t>(j)] = std::move(s);
        } else {
            ring[static_cast<size_t>(j)] = Eigen::VectorXd::Zero(m);
        }
    }
    int head = 0;

    SimResult out;
    out.trace.times.reserve(static_cast<size_t>(nsteps) + 1);
    out.trace.Ed.reserve(static_cast<size_t>(nsteps) + 1);
    out.trace.Etilde.reserve(static_cast<size_t>(nsteps) + 1);

    const int ring_len = static_cast<int>(L);
    double E0 = 0.0;
    for (long long k = 0; k <= nsteps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Eigen::VectorXd y_cur =
            model.quad.B.transpose() * z.segment(n, n1);
        const double Q = history_quadrature(ring, head, y_cur, dt);

        const double Ed = 0.5 * (sqrtA1 * z.head(n1)).squaredNorm() +
                          0.5 * (sqrtA2 * z.segment(n1, n2)).squaredNorm() +
                          0.5 * z.tail(n).squaredNorm() + 0.5 * params.mu * Q;

        const Eigen::VectorXd zt = tp.P * z;
        const double Etilde = 0.5 * (bs.sqrtA * zt.head(n)).squaredNorm() +
                              0.5 * zt.tail(n).squaredNorm() + 0.5 * params.mu * Q;

        out.trace.times.push_back(t);
        out.trace.Ed.push_back(Ed);
        out.trace.Etilde.push_back(Etilde);

        if (k == 0) E0 = Ed;
        if (!std::isfinite(Ed) || (E0 > 0.0 && Ed > 1e6 * E0)) {
            throw BlowUp("energy exceeded 1e6 x its initial value at t = " +
                         std::to_string(t));
        }
        if (k == nsteps) break;

        Eigen::VectorXd rhs = rhs_mat * z;
        if (params.alpha2 != 0.0) {
            const Eigen::VectorXd& oldest = ring[head % ring_len];
            const Eigen::VectorXd& next =
                ring_len >= 2 ? ring[(head + 1) % ring_len] : y_cur;
            rhs.noalias() -=
                (dt * params.alpha2 * 0.5) * (Bext * (oldest + next));
        }
        z = lu.solve(rhs);
        ring[head % ring_len] = y_cur;
        head = (head + 1) % ring_len;
    }

    out.final_state.w = z.head(n);
    out.final_state.wdot = z.tail(n);
    out.final_state.t = static_cast<double>(nsteps) * dt;
    out.final_state.history.resize(ring.size());
    for (int j = 0; j < ring_len; ++j) {
        out.final_state.history[static_cast<size_t>(j)] =
            ring[(head + j) % ring_len];
    }
    return out;
}

double delay_energy(const ModalModel& model, const DelayParams& params,
                    const DelayState& state) {
    validate(model.cfg);
    validate(params);
    const int n1 = model.quad.dims.n1;
    const int n2 = model.quad.dims.n2;
    const int n = n1 + n2;
    if (state.w.size() != n || state.wdot.size() != n) {
        throw DimensionMismatch("state must have n1 + n2 entries per field");
    }
    const Eigen::MatrixXd sqrtA1 = symmetric_sqrt(model.quad.A1, "A1");
    const Eigen::MatrixXd sqrtA2 = symmetric_sqrt(model.quad.A2, "A2");
    double Q = 0.0;
    if (!state.history.empty()) {
        const double dt = params.tau / static_cast<double>(state.history.size());
        const Eigen::VectorXd y_cur =
            model.quad.B.transpose() * state.wdot.head(n1);
        Q = history_quadrature(state.history, 0, y_cur, dt);
    }
    return 0.5 * (sqrtA1 * state.w.head(n1)).squaredNorm() +
           0.5 * (sqrtA2 * state.w.tail(n2)).squaredNorm() +
           0.5 * state.wdot.squaredNorm() + 0.5 * params.mu * Q;
}

DecayFit fit_decay_rate(const EnergyTrace& trace, double t_start, double t_end) {
    std::vector<double> ts;
    std::vector<double> logs;
    for (size_t i = 0; i < trace.times.size(); ++i) {
        const double t = trace.times[i];
        if (t < t_start || t > t_end) continue;
        if (!(trace.Ed[i] > 0.0)) break;
        ts.push_back(t);
        logs.push_back(std::log(trace.Ed[i]));
    }
    if (ts.size() < 10) {
        throw DegenerateWindow("decay fit needs at least 10 positive samples");
    }
    const double nsamp = static_cast<double>(ts.size());
    double mt = 0.0, ml = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        ml += logs[i];
    }
    mt /= nsamp;
    ml /= nsamp;
    double stt = 0.0, stl = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        stl += (ts[i] - mt) * (logs[i] - ml);
    }
    if (stt <= 0.0) throw DegenerateWindow("decay fit window has zero time spread");
    const double slope = stl / stt;
    const double intercept = ml - slope * mt;

    DecayFit fit;
    fit.omega = -slope;
    const double e0 = trace.Ed.empty() ? 0.0 : trace.Ed.front();
    fit.C = e0 > 0.0 ? std::exp(intercept) / e0 : std::exp(intercept);
    double ss = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        const double r = logs[i] - (intercept + slope * ts[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / nsamp);
    fit.window = {ts.front(), ts.back()};
    return fit;
}

std::string trace_to_csv(const EnergyTrace& trace) {
    if (trace.Ed.size() != trace.times.size() ||
        trace.Etilde.size() != trace.times.size()) {
        throw DimensionMismatch("energy trace columns disagree in length");
    }
    std::string out = "t,Ed,Etilde\n";
    for (size_t i = 0; i < trace.times.size(); ++i) {
        out += fmt17(trace.times[i]);
        out += ',';
        out += fmt17(trace.Ed[i]);
        out += ',';
        out += fmt17(trace.Etilde[i]);
        out += '\n';
    }
    return out;
}

}  // namespace cwl
