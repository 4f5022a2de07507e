#pragma once

#include <array>
#include <cmath>
#include <string>

#include "aqc/common.hpp"

namespace aqc {

namespace detail {

/// Coefficient set of the exact solution under the +/- omega drive.
/// Valid for either sign of omega; E stays real for |omega| < 1, alpha < 1/2.
struct RawSolution {
    double alpha, beta, omega;
    double E, omega1, omega2, lambda;
    double A, B, C, D;
};

inline RawSolution raw_solution(double alpha, double omega) {
    RawSolution r;
    r.alpha = alpha;
    r.beta = 1.0 - alpha;
    r.omega = omega;
    const double w = omega;
    r.E = std::sqrt((1.0 - w) * (1.0 - w) + 4.0 * alpha * w);
    r.omega1 = 0.5 * (w + r.E);
    r.omega2 = 0.5 * (w - r.E);
    r.lambda = 2.0 * std::sqrt(alpha * r.beta) / ((r.beta - alpha - w) + r.E);
    const double den = (1.0 - w) * (1.0 - w) + 4.0 * alpha * w + (r.beta - alpha - w) * r.E;
    const double sa = std::sqrt(alpha);
    const double sb = std::sqrt(r.beta);
    r.A = ((1.0 - w) * (1.0 - w) - alpha * (1.0 - 3.0 * w) + (r.beta - w) * r.E) / den * sb;
    r.B = (alpha * (1.0 + w) - alpha * r.E) / den * sb;
    r.C = ((1.0 + w) * (1.0 + w) - r.beta * (1.0 + 3.0 * w) - (alpha + w) * r.E) / den * sa;
    r.D = (r.beta * (1.0 - w) + r.beta * r.E) / den * sa;
    return r;
}

inline void require_omega_range(double omega) {
    if (!(omega > 0.0 && omega < 0.5))
        throw ParameterOutOfRange("omega must lie in (0, 1/2), got " + std::to_string(omega));
}

}  // namespace detail

/// Exact solution data for the drive H(omega t) from the uniform initial state.
struct ClosedFormSolution {
    double alpha, beta, omega;
    double E;               // sqrt((1-omega)^2 + 4 alpha omega)
    double omega1, omega2;  // (omega +- E)/2
    double lambda;          // D/A = -B/C
    double A, B, C, D;
};

inline ClosedFormSolution solve_closed_form(double alpha, double omega) {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw ParameterOutOfRange("alpha must lie in [0, 1/2), got " + std::to_string(alpha));
    detail::require_omega_range(omega);
    const auto r = detail::raw_solution(alpha, omega);
    return ClosedFormSolution{r.alpha, r.beta, r.omega, r.E, r.omega1, r.omega2,
                              r.lambda, r.A,   r.B,     r.C, r.D};
}

/// The lambda-based printed forms of (A, B, C, D); an independent route used
/// to cross-check the E-based primaries.
inline std::array<double, 4> lambda_form_coefficients(double alpha, double omega) {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw ParameterOutOfRange("alpha must lie in [0, 1/2)");
    const auto r = detail::raw_solution(alpha, omega);
    const double sa = std::sqrt(alpha);
    const double sb = std::sqrt(r.beta);
    const double l = r.lambda;
    const double den = 1.0 + l * l;
    return {(l * sa + sb) / den, l * (l * sb - sa) / den, (sa - l * sb) / den,
            l * (l * sa + sb) / den};
}

/// State at time t: x = e^{-it/2}(A e^{i w1 t} + B e^{i w2 t}),
///                  y = e^{-it/2}(C e^{-i w1 t} + D e^{-i w2 t}).
/// reversed = true evaluates the solution of the -omega drive.
inline SubspaceState evolve_closed_form(const ClosedFormSolution& sol, double t, bool reversed) {
    if (t < 0.0) throw ParameterOutOfRange("time must be >= 0");
    const auto r = detail::raw_solution(sol.alpha, reversed ? -sol.omega : sol.omega);
    const Complex half = std::polar(1.0, -0.5 * t);
    const Complex e1 = std::polar(1.0, r.omega1 * t);
    const Complex e2 = std::polar(1.0, r.omega2 * t);
    return SubspaceState{half * (r.A * e1 + r.B * e2),
                         half * (r.C * std::conj(e1) + r.D * std::conj(e2))};
}

/// Relative-phase data of the two control branches after evolving for time T.
/// arg(inner) estimates the target phase 2 pi 2^j alpha (mod 2 pi) when
/// T = 2^j pi / omega.
struct OverlapReport {
    Complex inner;
    double mu1;             // (E - E')T/2, kept unreduced
    double mu2;             // (E + E')T/2
    double p_success;       // (1 + |inner|^2)/2
    double arg_phase;       // arg(inner)
    double leak_magnitude;  // sqrt(1 - |inner|^2)
};

namespace detail {

/// Interference expansion of the branch overlap: four coefficient pairs
/// beating at mu1/mu2, each group carried by the e^{+-i omega T} drift of its
/// branch. At T = 2k pi / omega the drift factors drop and the expansion
/// reduces to the four-term (AA'+DD'), (BB'+CC'), (AB'+C'D), (A'B+CD') form.
inline Complex overlap_via_expansion(const RawSolution& f, const RawSolution& r, double T,
                                     double mu1, double mu2) {
    const Complex em1 = std::polar(1.0, mu1);
    const Complex em2 = std::polar(1.0, mu2);
    const Complex cw = std::polar(1.0, f.omega * T);
    const Complex fwd_group =
        f.A * r.A * em1 + f.B * r.B * std::conj(em1) + f.A * r.B * em2 + r.A * f.B * std::conj(em2);
    const Complex rev_group =
        f.D * r.D * em1 + f.C * r.C * std::conj(em1) + r.C * f.D * em2 + f.C * r.D * std::conj(em2);
    return cw * fwd_group + std::conj(cw) * rev_group;
}

}  // namespace detail

inline OverlapReport overlap_report(double alpha, double omega, double T) {
    if (!(T > 0.0)) throw ParameterOutOfRange("T must be > 0");
    const ClosedFormSolution sol = solve_closed_form(alpha, omega);

    const SubspaceState fwd = evolve_closed_form(sol, T, false);
    const SubspaceState rev = evolve_closed_form(sol, T, true);
    const Complex direct = subspace_overlap(rev, fwd);

    const auto f = detail::raw_solution(alpha, omega);
    const auto r = detail::raw_solution(alpha, -omega);
    const double mu1 = 0.5 * (f.E - r.E) * T;
    const double mu2 = 0.5 * (f.E + r.E) * T;
    const Complex expansion = detail::overlap_via_expansion(f, r, T, mu1, mu2);
    // both routes carry an intrinsic phase uncertainty ~ T eps, so the
    // agreement tolerance must grow with the accumulated angle
    const double tol = 1e-10 + T * 1e-14;
    if (std::abs(direct - expansion) > tol)
        throw Error("overlap routes disagree by " + std::to_string(std::abs(direct - expansion)));

    OverlapReport rep;
    rep.inner = direct;
    rep.mu1 = mu1;
    rep.mu2 = mu2;
    const double mag2 = std::norm(direct);
    rep.p_success = 0.5 * (1.0 + mag2);
    rep.arg_phase = std::arg(direct);
    rep.leak_magnitude = std::sqrt(std::max(0.0, 1.0 - mag2));
    return rep;
}

/// The four interference products (AA'+DD', BB'+CC', AB'+C'D, A'B+CD'),
/// exact at finite omega. Small-omega limits per omega^2:
/// 1 - 3 alpha beta, -alpha beta, 2 alpha beta, 2 alpha beta.
inline std::array<double, 4> perturbative_coefficients(double alpha, double omega) {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw ParameterOutOfRange("alpha must lie in [0, 1/2)");
    detail::require_omega_range(omega);
    const auto f = detail::raw_solution(alpha, omega);
    const auto r = detail::raw_solution(alpha, -omega);
    return {f.A * r.A + f.D * r.D, f.B * r.B + f.C * r.C, f.A * r.B + r.C * f.D,
            r.A * f.B + f.C * r.D};
}

/// Deviation of mu1 from 2 pi 2^j alpha (1 + beta(beta-alpha) omega^2) at
/// T = 2^j pi / omega, reduced mod 2 pi. Returns the deviation relative to
/// 2 pi 2^j alpha omega^4 (the next correction is O(omega^5 T)), or the
/// absolute circular deviation when alpha = 0.
inline double mu1_expansion_check(double alpha, double omega, int j) {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw ParameterOutOfRange("alpha must lie in [0, 1/2)");
    detail::require_omega_range(omega);
    if (j < 1) throw ParameterOutOfRange("stage index must be >= 1");
    const double T = std::ldexp(kPi, j) / omega;
    const double beta = 1.0 - alpha;
    const double Ef = std::sqrt((1.0 - omega) * (1.0 - omega) + 4.0 * alpha * omega);
    const double Er = std::sqrt((1.0 + omega) * (1.0 + omega) - 4.0 * alpha * omega);
    const double mu1 = 0.5 * (Ef - Er) * T;
    const double target = 2.0 * kPi * std::ldexp(alpha, j) * (1.0 + beta * (beta - alpha) * omega * omega);
    const double dev = std::abs(wrap_angle(mu1 - target));
    if (alpha == 0.0) return dev;
    return dev / (2.0 * kPi * std::ldexp(alpha, j) * omega * omega * omega * omega);
}

}  // namespace aqc
