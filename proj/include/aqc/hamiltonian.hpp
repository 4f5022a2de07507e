#pragma once

#include <array>
#include <cmath>
#include <string>

#include "aqc/common.hpp"
#include "aqc/database.hpp"

namespace aqc {

// Largest register size for which the controlled whole-system Hamiltonian is
// materialized as a dense matrix.
inline constexpr int kMaxControlledQubits = 6;  // N <= 64

/// Interpolation weights of the four oracle Hamiltonians along the path.
/// They always sum to 1; s1 and s3 are signed.
struct ScheduleWeights {
    double s0, s1, s2, s3;

    double sum() const { return s0 + s1 + s2 + s3; }
};

inline ScheduleWeights schedule_weights(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return ScheduleWeights{0.5 * (1.0 + c), 0.5 * s, 0.5 * (1.0 - c), -0.5 * s};
}

/// H(theta) on the {|0^>, |1^>} basis:
///   [ alpha                 -sqrt(alpha beta) e^{+i theta} ]
///   [ -sqrt(alpha beta) e^{-i theta}          beta          ]
inline Eigen::Matrix2cd hamiltonian_2x2(double alpha, double theta) {
    require_alpha_range(alpha);
    const double beta = 1.0 - alpha;
    const double s = std::sqrt(alpha * beta);
    const Complex e = std::polar(1.0, theta);
    Eigen::Matrix2cd h;
    h << Complex{alpha, 0.0}, -s * e, -s * std::conj(e), Complex{beta, 0.0};
    return h;
}

/// Instantaneous ground state (sqrt(beta), e^{-i theta} sqrt(alpha));
/// annihilated by hamiltonian_2x2(alpha, theta).
inline SubspaceState ground_state(double alpha, double theta) {
    require_alpha_range(alpha);
    const double beta = 1.0 - alpha;
    return SubspaceState{Complex{std::sqrt(beta), 0.0},
                         std::polar(std::sqrt(alpha), -theta)};
}

/// The four oracle projector complements H_k = I - |psi_k><psi_k|.
inline std::array<Matrix, 4> oracle_hamiltonians(const MarkedDatabase& db) {
    std::array<Matrix, 4> h;
    const auto N = static_cast<Eigen::Index>(db.size());
    for (int k = 0; k < 4; ++k) {
        const Vector psi = psi_k(db, k);
        h[k] = Matrix::Identity(N, N) - psi * psi.adjoint();
    }
    return h;
}

/// Uncontrolled: the weighted combination sum_k s_k(theta) H_k (N x N).
/// Controlled: block-diagonal 2N x 2N with the +theta drive on the control-0
/// block and the -theta drive on the control-1 block.
inline Matrix hamiltonian_full(const MarkedDatabase& db, double theta, bool controlled) {
    detail::require_dense(db);
    const auto N = static_cast<Eigen::Index>(db.size());
    const auto hk = oracle_hamiltonians(db);
    auto combine = [&hk](double th) -> Matrix {
        const ScheduleWeights w = schedule_weights(th);
        return w.s0 * hk[0] + w.s1 * hk[1] + w.s2 * hk[2] + w.s3 * hk[3];
    };
    if (!controlled) return combine(theta);
    if (db.n > kMaxControlledQubits)
        throw DimensionTooLarge("controlled Hamiltonian limited to N <= 64, got N = " +
                                std::to_string(db.size()));
    Matrix h = Matrix::Zero(2 * N, 2 * N);
    h.topLeftCorner(N, N) = combine(theta);
    h.bottomRightCorner(N, N) = combine(-theta);
    return h;
}

/// Berry phase accumulated over theta in [0, 2^j pi] and the relative phase
/// between the two control branches.
struct PhaseRecord {
    double gamma;      // 2^j pi alpha
    double big_gamma;  // 2 gamma
    double winding;    // theta endpoint, 2^j pi
};

inline PhaseRecord berry_phase_exact(double alpha, int j) {
    require_alpha_range(alpha);
    if (j < 1) throw ParameterOutOfRange("stage index must be >= 1, got " + std::to_string(j));
    const double winding = std::ldexp(kPi, j);
    const double gamma = winding * alpha;
    return PhaseRecord{gamma, 2.0 * gamma, winding};
}

}  // namespace aqc
