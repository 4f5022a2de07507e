#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aqc/closed_form.hpp"
#include "aqc/common.hpp"
#include "aqc/database.hpp"
#include "aqc/estimator.hpp"
#include "aqc/integrator.hpp"

namespace aqc {

inline constexpr double kOmegaMax = 0.1;
inline constexpr int kMaxStagesClosedForm = 20;
inline constexpr int kMaxStagesIntegrated = 10;

// Budget threshold for the per-stage phase error: 2 pi / 32.
inline constexpr double kDeltaBudget = 2.0 * kPi / 32.0;

struct StageConfig {
    int j;
    double omega_j;  // c_omega 2^{-j/2}
    double T_j;      // 2^j pi / omega_j
    long R_j;        // repetitions per measurement basis
};

/// Analytic worst case over alpha of the stage phase-error budget.
/// max alpha beta = 1/4, max alpha beta (beta - alpha) = 1/(6 sqrt 3).
inline double delta_bound_worst_case(double omega, int j) {
    const double w2 = omega * omega;
    return 2.0 * kPi * 2.0 * w2 + 2.0 * w2 + 2.0 * kPi * std::ldexp(w2, j) / (6.0 * std::sqrt(3.0));
}

inline std::vector<StageConfig> plan_stages(int m, double c_omega, long r0, double r_slope) {
    if (m < 1 || m > kMaxStagesClosedForm)
        throw ParameterOutOfRange("m must lie in [1, " + std::to_string(kMaxStagesClosedForm) +
                                  "], got " + std::to_string(m));
    if (!(c_omega > 0.0 && c_omega <= kOmegaMax))
        throw ParameterOutOfRange("c_omega must lie in (0, " + std::to_string(kOmegaMax) +
                                  "], got " + std::to_string(c_omega));
    if (r0 < 1) throw ParameterOutOfRange("r0 must be >= 1");
    if (r_slope < 0.0) throw ParameterOutOfRange("r_slope must be >= 0");

    std::vector<StageConfig> stages;
    stages.reserve(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        StageConfig s;
        s.j = j;
        s.omega_j = c_omega * std::exp2(-0.5 * static_cast<double>(j));
        s.T_j = std::ldexp(kPi, j) / s.omega_j;
        s.R_j = r0 + static_cast<long>(std::ceil(r_slope * static_cast<double>(m - j)));
        if (delta_bound_worst_case(s.omega_j, j) >= kDeltaBudget)
            throw ParameterOutOfRange("stage " + std::to_string(j) +
                                      " violates the phase-error budget; lower c_omega");
        stages.push_back(s);
    }
    return stages;
}

/// Stage phase-error budget at a concrete alpha:
/// 2 pi (1 - p_s) + 8 alpha beta omega^2 + 2 pi 2^j alpha beta |beta - alpha| omega^2.
inline double delta_bound(double alpha, double omega, int j) {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw ParameterOutOfRange("alpha must lie in [0, 1/2)");
    if (j < 1) throw ParameterOutOfRange("stage index must be >= 1");
    if (alpha == 0.0) return 0.0;
    const double beta = 1.0 - alpha;
    const double T = std::ldexp(kPi, j) / omega;
    const OverlapReport rep = overlap_report(alpha, omega, T);
    const double w2 = omega * omega;
    return 2.0 * kPi * (1.0 - rep.p_success) + 8.0 * alpha * beta * w2 +
           2.0 * kPi * std::ldexp(alpha, j) * beta * std::abs(beta - alpha) * w2;
}

enum class EngineMode { closed_form, integrate_2d, full };

inline const char* to_string(EngineMode mode) {
    switch (mode) {
        case EngineMode::closed_form: return "closed_form";
        case EngineMode::integrate_2d: return "integrate_2d";
        case EngineMode::full: return "full";
    }
    return "unknown";
}

inline EngineMode engine_mode_from_string(const std::string& name) {
    if (name == "closed_form") return EngineMode::closed_form;
    if (name == "integrate_2d") return EngineMode::integrate_2d;
    if (name == "full") return EngineMode::full;
    throw ParameterOutOfRange("unknown mode '" + name + "'");
}

struct StageCost {
    int j;
    double T_j;
    long R_j;
    int bases;          // always 2: X and Y quadratures
    double stage_cost;  // 2 R_j T_j
};

struct CostLedger {
    std::vector<StageCost> per_stage;
    double total = 0.0;  // evolution time only
};

struct StageDiagnostics {
    int stage;
    double eta;
    double raw_phase;
    double qX;
    double qY;
    long R;
    double ideal_phase;   // 2 pi 2^j alpha mod 2 pi
    double achieved_arg;  // arg of the engine's branch overlap
    bool low_confidence;
};

struct RunParams {
    double c_omega = 0.05;
    double delta = 0.22;
    double failure_prob = 0.1;  // split evenly across stages
};

struct CountingResult {
    AlphaEstimate alpha_hat;
    CostLedger ledger;
    std::vector<StageDiagnostics> stages;
};

namespace detail {

inline Complex stage_overlap(const MarkedDatabase& db, const StageConfig& st, EngineMode mode) {
    const double alpha = db.alpha();
    switch (mode) {
        case EngineMode::closed_form: {
            if (alpha == 0.0) return Complex{1.0, 0.0};
            return overlap_report(alpha, st.omega_j, st.T_j).inner;
        }
        case EngineMode::integrate_2d: {
            const SubspaceState fwd = integrate_2d(alpha, st.omega_j, st.T_j, false);
            const SubspaceState rev = integrate_2d(alpha, st.omega_j, st.T_j, true);
            return subspace_overlap(rev, fwd);
        }
        case EngineMode::full: {
            const Vector state = integrate_full(db, st.omega_j, st.T_j);
            const auto N = static_cast<Eigen::Index>(db.size());
            // control-1 block against control-0 block, each of norm 1/sqrt2
            return 2.0 * state.tail(N).dot(state.head(N));
        }
    }
    throw Error("unreachable engine mode");
}

}  // namespace detail

/// The full counting run: one adiabatic stage per bit, sampled measurements,
/// eighths rounding, and bit recovery. The ledger counts evolution time only
/// (2 R_j T_j per stage); sampling and post-processing are free.
inline CountingResult run_counting(const MarkedDatabase& db, int m, EngineMode mode,
                                   std::uint64_t seed, const RunParams& params = {}) {
    if (mode == EngineMode::full && db.n > kMaxControlledQubits)
        throw GuardExceeded("full mode limited to N <= 64");
    const int cap = (mode == EngineMode::closed_form) ? kMaxStagesClosedForm : kMaxStagesIntegrated;
    if (m < 1 || m > cap)
        throw GuardExceeded("m = " + std::to_string(m) + " outside [1, " + std::to_string(cap) +
                            "] for mode " + to_string(mode));

    const long r0 = chernoff_repetitions(params.delta, params.failure_prob / m);
    const double r_slope = static_cast<double>(r0) / 2.0;
    const auto stages = plan_stages(m, params.c_omega, r0, r_slope);

    const double alpha = db.alpha();
    CountingResult result;
    std::vector<EtaEstimate> etas;
    etas.reserve(stages.size());
    for (const StageConfig& st : stages) {
        const Complex inner = detail::stage_overlap(db, st, mode);
        const BasisProbabilities probs = measurement_probabilities(inner);
        const MeasurementPlan plan{params.delta, params.failure_prob / m, st.R_j};
        const SampleCounts counts =
            sample_counts(probs.pX_plus, probs.pY_plus, plan,
                          rng::derive(seed, static_cast<std::uint64_t>(st.j), 0));
        const EtaEstimate eta = estimate_eta(counts.qX, counts.qY, st.j);
        etas.push_back(eta);

        StageDiagnostics diag;
        diag.stage = st.j;
        diag.eta = eta.eta();
        diag.raw_phase = eta.raw_phase;
        diag.qX = counts.qX;
        diag.qY = counts.qY;
        diag.R = st.R_j;
        double ideal = std::fmod(2.0 * kPi * std::ldexp(alpha, st.j), 2.0 * kPi);
        if (ideal < 0.0) ideal += 2.0 * kPi;
        diag.ideal_phase = ideal;
        diag.achieved_arg = std::arg(inner);
        diag.low_confidence = eta.low_confidence;
        result.stages.push_back(diag);

        result.ledger.per_stage.push_back(
            StageCost{st.j, st.T_j, st.R_j, 2, 2.0 * static_cast<double>(st.R_j) * st.T_j});
        result.ledger.total += 2.0 * static_cast<double>(st.R_j) * st.T_j;
    }
    result.alpha_hat = recover_bits(etas);
    return result;
}

struct ScalingPoint {
    int m;
    double epsilon;  // 2^{-m}
    double t_total;
};

struct ScalingCurve {
    std::vector<ScalingPoint> points;
    double slope;  // least-squares slope of log T_total vs log(1/epsilon)
};

/// Analytic ledger totals over a range of precisions; no sampling involved.
inline ScalingCurve scaling_curve(int m_lo, int m_hi, double c_omega, double delta = 0.22,
                                  double failure_prob = 0.1) {
    if (m_lo < 1 || m_hi > kMaxStagesClosedForm || m_lo >= m_hi)
        throw ParameterOutOfRange("need 1 <= m_lo < m_hi <= " +
                                  std::to_string(kMaxStagesClosedForm));
    ScalingCurve curve;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int m = m_lo; m <= m_hi; ++m) {
        const long r0 = chernoff_repetitions(delta, failure_prob / m);
        const auto stages = plan_stages(m, c_omega, r0, static_cast<double>(r0) / 2.0);
        double total = 0.0;
        for (const auto& st : stages) total += 2.0 * static_cast<double>(st.R_j) * st.T_j;
        curve.points.push_back(ScalingPoint{m, std::ldexp(1.0, -m), total});
        const double x = static_cast<double>(m) * std::log(2.0);  // log(1/epsilon)
        const double y = std::log(total);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(curve.points.size());
    curve.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return curve;
}

}  // namespace aqc
