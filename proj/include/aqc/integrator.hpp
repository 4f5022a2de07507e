#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "aqc/common.hpp"
#include "aqc/database.hpp"
#include "aqc/hamiltonian.hpp"

namespace aqc {

struct IntegrationConfig {
    double step = 0.0;       // <= 0 selects the default min(1e-3, omega/50)
    int scheme_order = 4;    // classical fourth-order one-step scheme
    bool store_trajectory = false;
};

inline double default_step(double omega) { return std::min(1e-3, std::abs(omega) / 50.0); }

struct TrajectoryPoint {
    double t;
    SubspaceState state;
};

struct Subspace2dRun {
    SubspaceState state;
    double norm_drift = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

namespace detail {

inline long long resolve_steps(double T, double step) {
    if (!(T >= 0.0)) throw ParameterOutOfRange("T must be >= 0");
    if (!(step > 0.0)) throw StepTooLarge("step must be > 0");
    if (step > 0.1) throw StepTooLarge("step must be <= 0.1, got " + std::to_string(step));
    const double n = std::ceil(T / step - 1e-9);
    if (n > 1e9) throw CostGuardExceeded("run needs " + std::to_string(n) + " steps (> 1e9)");
    return std::max(1LL, static_cast<long long>(n));
}

/// Classical RK4 on i d/dt (x, y) = H(theta(t)) (x, y) in the 2-D subspace.
/// No renormalization is applied; the terminal norm drift must stay below
/// 1e-9 or the run is rejected as under-resolved.
template <class ThetaFn>
Subspace2dRun rk4_subspace(double alpha, ThetaFn&& theta, double T, bool reversed,
                           const IntegrationConfig& cfg, double step) {
    require_alpha_range(alpha);
    if (cfg.scheme_order != 4)
        throw ParameterOutOfRange("only the classical fourth-order scheme is available");
    const double beta = 1.0 - alpha;
    const double s = std::sqrt(alpha * beta);
    const double sign = reversed ? -1.0 : 1.0;
    const Complex minus_i{0.0, -1.0};

    // dv/dt = -i H(theta(t)) v
    auto deriv = [&](double t, Complex x, Complex y, Complex& dx, Complex& dy) {
        const Complex e = std::polar(1.0, sign * theta(t));
        dx = minus_i * (alpha * x - s * e * y);
        dy = minus_i * (-s * std::conj(e) * x + beta * y);
    };

    Subspace2dRun run;
    Complex x{std::sqrt(beta), 0.0};
    Complex y{std::sqrt(alpha), 0.0};
    if (T == 0.0) {
        run.state = SubspaceState{x, y};
        return run;
    }

    const long long nsteps = resolve_steps(T, step);
    const double h = T / static_cast<double>(nsteps);
    if (cfg.store_trajectory) {
        run.trajectory.reserve(static_cast<std::size_t>(nsteps) + 1);
        run.trajectory.push_back({0.0, SubspaceState{x, y}});
    }

    Complex k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
    for (long long i = 0; i < nsteps; ++i) {
        const double t = h * static_cast<double>(i);
        deriv(t, x, y, k1x, k1y);
        deriv(t + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
        deriv(t + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
        deriv(t + h, x + h * k3x, y + h * k3y, k4x, k4y);
        x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        if (cfg.store_trajectory)
            run.trajectory.push_back({h * static_cast<double>(i + 1), SubspaceState{x, y}});
    }

    run.state = SubspaceState{x, y};
    run.norm_drift = std::abs(run.state.norm() - 1.0);
    if (run.norm_drift > 1e-9)
        throw StepTooLarge("norm drift " + std::to_string(run.norm_drift) +
                           " exceeds 1e-9; reduce the step");
    return run;
}

}  // namespace detail

/// Brute-force state at time T under the linear ramp theta = omega t.
inline SubspaceState integrate_2d(double alpha, double omega, double T, bool reversed,
                                  const IntegrationConfig& cfg = {}) {
    detail::require_omega_range(omega);
    const double step = cfg.step > 0.0 ? cfg.step : default_step(omega);
    return detail::rk4_subspace(alpha, [omega](double t) { return omega * t; }, T, reversed, cfg,
                                step)
        .state;
}

/// Same run with the terminal norm drift and (optionally) the trajectory.
inline Subspace2dRun integrate_2d_run(double alpha, double omega, double T, bool reversed,
                                      const IntegrationConfig& cfg = {}) {
    detail::require_omega_range(omega);
    const double step = cfg.step > 0.0 ? cfg.step : default_step(omega);
    return detail::rk4_subspace(alpha, [omega](double t) { return omega * t; }, T, reversed, cfg,
                                step);
}

/// Integration under an arbitrary monotone sweep theta(t); used to probe the
/// geometric (path-only) character of the accumulated phase.
inline SubspaceState integrate_2d_with_schedule(double alpha,
                                                const std::function<double(double)>& theta,
                                                double T, bool reversed,
                                                const IntegrationConfig& cfg) {
    require_alpha_range(alpha);
    if (!(cfg.step > 0.0)) throw StepTooLarge("schedule integration requires an explicit step");
    return detail::rk4_subspace(alpha, [&theta](double t) { return theta(t); }, T, reversed, cfg,
                                cfg.step)
        .state;
}

/// Full-register evolution of (|0> + |1>)/sqrt2 (x) psi_0 under the
/// controlled drive: +theta on the control-0 block, -theta on the control-1
/// block. The Hamiltonian is assembled from the four oracle projectors at
/// every stage evaluation. Returns the 2N-amplitude final state, ordered
/// control-major.
inline Vector integrate_full(const MarkedDatabase& db, double omega, double T,
                             const IntegrationConfig& cfg = {}) {
    if (db.n > kMaxControlledQubits)
        throw DimensionTooLarge("full integration limited to N <= 64, got N = " +
                                std::to_string(db.size()));
    detail::require_omega_range(omega);
    if (cfg.scheme_order != 4)
        throw ParameterOutOfRange("only the classical fourth-order scheme is available");
    const double step = cfg.step > 0.0 ? cfg.step : default_step(omega);
    const auto N = static_cast<Eigen::Index>(db.size());
    const auto hk = oracle_hamiltonians(db);

    Vector state(2 * N);
    {
        const Vector psi0 = psi_k(db, 0);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        state.head(N) = inv_sqrt2 * psi0;
        state.tail(N) = inv_sqrt2 * psi0;
    }
    if (T == 0.0) return state;

    const long long nsteps = detail::resolve_steps(T, step);
    const double h = T / static_cast<double>(nsteps);
    const Complex minus_i{0.0, -1.0};

    auto deriv = [&](double t, const Vector& v, Vector& dv) {
        const ScheduleWeights wf = schedule_weights(omega * t);
        const ScheduleWeights wr = schedule_weights(-omega * t);
        dv.head(N) = minus_i * ((wf.s0 * hk[0] + wf.s1 * hk[1] + wf.s2 * hk[2] + wf.s3 * hk[3]) *
                                v.head(N));
        dv.tail(N) = minus_i * ((wr.s0 * hk[0] + wr.s1 * hk[1] + wr.s2 * hk[2] + wr.s3 * hk[3]) *
                                v.tail(N));
    };

    Vector k1(2 * N), k2(2 * N), k3(2 * N), k4(2 * N), tmp(2 * N);
    for (long long i = 0; i < nsteps; ++i) {
        const double t = h * static_cast<double>(i);
        deriv(t, state, k1);
        tmp = state + 0.5 * h * k1;
        deriv(t + 0.5 * h, tmp, k2);
        tmp = state + 0.5 * h * k2;
        deriv(t + 0.5 * h, tmp, k3);
        tmp = state + h * k3;
        deriv(t + h, tmp, k4);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const double drift = std::abs(state.norm() - 1.0);
    if (drift > 1e-9)
        throw StepTooLarge("norm drift " + std::to_string(drift) + " exceeds 1e-9; reduce the step");
    return state;
}

/// Discretized Berry connection: midpoint quadrature of i <psi|d psi/d theta>
/// over theta in [0, windings 2 pi], with the derivative taken by central
/// differences at scale 1e-5 on the exact instantaneous ground state.
inline double numeric_berry_phase(double alpha, int windings, long long steps) {
    require_alpha_range(alpha);
    if (windings < 1) throw ParameterOutOfRange("windings must be >= 1");
    if (steps < 1000) throw TooFewSteps("need >= 1000 steps, got " + std::to_string(steps));
    const double span = static_cast<double>(windings) * 2.0 * kPi;
    const double h = span / static_cast<double>(steps);
    const double hd = 1e-5;
    Complex acc{0.0, 0.0};
    for (long long k = 0; k < steps; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) * h;
        const SubspaceState p = ground_state(alpha, mid);
        const SubspaceState plus = ground_state(alpha, mid + hd);
        const SubspaceState minus = ground_state(alpha, mid - hd);
        const SubspaceState d{(plus.x - minus.x) / (2.0 * hd), (plus.y - minus.y) / (2.0 * hd)};
        acc += subspace_overlap(p, d) * h;
    }
    return (Complex{0.0, 1.0} * acc).real();
}

/// Trajectory dump, one row per stored sample: t,re_x,im_x,re_y,im_y
inline void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& traj) {
    out << "t,re_x,im_x,re_y,im_y\n";
    const auto flags = out.flags();
    out.precision(17);
    for (const auto& p : traj)
        out << p.t << ',' << p.state.x.real() << ',' << p.state.x.imag() << ','
            << p.state.y.real() << ',' << p.state.y.imag() << '\n';
    out.flags(flags);
}

}  // namespace aqc
