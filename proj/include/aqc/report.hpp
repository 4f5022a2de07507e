#pragma once

#include <ostream>

#include "json.hpp"

#include "aqc/estimator.hpp"
#include "aqc/scheduler.hpp"

namespace aqc {

inline nlohmann::json to_json(const AlphaEstimate& est) {
    return nlohmann::json{{"value", est.value()},
                          {"numerator", est.numerator},
                          {"denominator", est.denominator},
                          {"bits", est.bits},
                          {"m", est.m},
                          {"epsilon", est.epsilon},
                          {"ambiguous", est.ambiguous}};
}

inline nlohmann::json to_json(const CostLedger& ledger) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : ledger.per_stage)
        stages.push_back({{"j", s.j},
                          {"T_j", s.T_j},
                          {"R_j", s.R_j},
                          {"bases", s.bases},
                          {"stage_cost", s.stage_cost}});
    return nlohmann::json{{"total", ledger.total}, {"per_stage", stages}};
}

inline nlohmann::json to_json(const StageDiagnostics& d) {
    return nlohmann::json{{"stage", d.stage},
                          {"eta", d.eta},
                          {"raw_phase", d.raw_phase},
                          {"qX", d.qX},
                          {"qY", d.qY},
                          {"R", d.R},
                          {"ideal_phase", d.ideal_phase},
                          {"achieved_arg", d.achieved_arg},
                          {"low_confidence", d.low_confidence}};
}

inline nlohmann::json to_json(const CountingResult& r) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& d : r.stages) stages.push_back(to_json(d));
    return nlohmann::json{{"alpha_hat", to_json(r.alpha_hat)},
                          {"ledger", to_json(r.ledger)},
                          {"stages", stages}};
}

/// Stage records as JSON lines: one {stage, eta, raw_phase, qX, qY, R} per
/// stage, then a final {alpha_hat, bits, m, epsilon} line.
inline void write_stage_records_jsonl(std::ostream& out, const CountingResult& r) {
    for (const auto& d : r.stages) {
        const nlohmann::json line{{"stage", d.stage}, {"eta", d.eta},
                                  {"raw_phase", d.raw_phase}, {"qX", d.qX},
                                  {"qY", d.qY},             {"R", d.R}};
        out << line.dump() << '\n';
    }
    const nlohmann::json last{{"alpha_hat", r.alpha_hat.value()},
                              {"bits", r.alpha_hat.bits},
                              {"m", r.alpha_hat.m},
                              {"epsilon", r.alpha_hat.epsilon}};
    out << last.dump() << '\n';
}

/// Scaling sweep as CSV: header then one m,epsilon,T_total row per point.
inline void write_scaling_csv(std::ostream& out, const ScalingCurve& curve) {
    out << "m,epsilon,T_total\n";
    const auto flags = out.flags();
    out.precision(17);
    for (const auto& p : curve.points) out << p.m << ',' << p.epsilon << ',' << p.t_total << '\n';
    out.flags(flags);
}

}  // namespace aqc
