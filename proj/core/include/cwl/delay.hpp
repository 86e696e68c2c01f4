#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <cwl/model.hpp>

namespace cwl {

// Closed-loop damping weights: instantaneous gain alpha1, delayed gain
// alpha2, lag tau, and the history-energy weight mu. Admissible when
// 0 <= alpha2 <= alpha1 and tau*alpha2 <= mu <= tau*(2*alpha1 - alpha2).
struct DelayParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double tau = 1.0;
    double mu = 0.0;
};

void validate(const DelayParams& p);  // throws InvalidParams

// [tau*alpha2, tau*(2*alpha1 - alpha2)]; throws InvalidParams when
// alpha2 > alpha1, alpha2 < 0, or tau <= 0.
std::pair<double, double> delay_weight_bounds(double alpha1, double alpha2, double tau);

struct DelayState {
    Eigen::VectorXd w;     // positions, both fields stacked (n1 + n2)
    Eigen::VectorXd wdot;  // velocities
    // Output samples B0^T wdot at the grid times t-tau, ..., t-dt (oldest
    // first, exactly L = tau/dt entries); together with the current output
    // they form the L+1 trapezoid nodes on [t-tau, t].
    std::vector<Eigen::VectorXd> history;
    double t = 0.0;
};

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> Ed;      // energy of the coupled variables
    std::vector<double> Etilde;  // same state measured through the transform
};

struct SimInit {
    Eigen::VectorXd w0;  // initial positions (n1 + n2)
    Eigen::VectorXd v0;  // initial velocities
    // History sampler for the output on [-tau, 0); empty means zero history.
    std::function<Eigen::VectorXd(double)> f0;
};

struct SimResult {
    EnergyTrace trace;
    DelayState final_state;
};

// Integrates the closed loop
//   wddot + A w + alpha1 BB^T wdot + alpha2 BB^T wdot(t - tau) = 0
// with an implicit trapezoidal step on the conservative + instantaneous part
// and the delayed term read explicitly from the history ring (trapezoid of
// the two ring samples bracketing t - tau + dt/2). Energy is sampled every
// step. Throws StepMismatch when tau is not an integer multiple of dt and
// BlowUp when the energy exceeds 1e6 x its initial value.
SimResult simulate(const ModalModel& model, const DelayParams& params,
                   const SimInit& init, double dt, double T);

// E_d = 1/2 ||sqrtA1 w1||^2 + 1/2 ||sqrtA2 w2||^2 + 1/2 ||wdot||^2
//       + (mu/2) * trapezoid of ||B0^T wdot||^2 over [t-tau, t].
double delay_energy(const ModalModel& model, const DelayParams& params,
                    const DelayState& state);

struct DecayFit {
    double omega = 0.0;     // fitted exponential rate (-slope of log-energy)
    double C = 0.0;         // fitted prefactor relative to E(0)
    double residual = 0.0;  // RMS of the log-linear fit
    std::pair<double, double> window{0.0, 0.0};
};

// Least-squares line through (t, log Ed) on [t_start, t_end]; samples are
// truncated at the first nonpositive energy. Throws DegenerateWindow when
// fewer than 10 samples remain.
DecayFit fit_decay_rate(const EnergyTrace& trace, double t_start, double t_end);

// CSV with header "t,Ed,Etilde", 17-significant-digit floats, LF endings.
std::string trace_to_csv(const EnergyTrace& trace);

}  // namespace cwl
