#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aqc/common.hpp"

namespace aqc {

namespace rng {

// splitmix64; all sampling randomness derives from one seed through
// derive(seed, a, b) so that stages and repetitions are independent streams.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = splitmix64(seed);
    z = splitmix64(z ^ (a + 0x9E3779B97F4A7C15ull));
    z = splitmix64(z ^ (b + 0xD1B54A32D192ED03ull));
    return z;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform53(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace rng

/// min_k |a - b - k|: distance on the unit circle of fractions.
inline double circular_distance(double a, double b) {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

struct MeasurementPlan {
    double delta;
    double failure_prob;
    long repetitions;  // per measurement basis
};

/// Smallest R with 2 e^{-2 delta^2 R} <= failure_prob.
inline long chernoff_repetitions(double delta, double failure_prob) {
    if (!(delta > 0.0 && delta < 0.5))
        throw ParameterOutOfRange("delta must lie in (0, 1/2), got " + std::to_string(delta));
    if (!(failure_prob > 0.0))
        throw ParameterOutOfRange("failure probability must be > 0");
    if (failure_prob >= 2.0) return 1;
    const double r = std::log(2.0 / failure_prob) / (2.0 * delta * delta);
    return std::max(1L, static_cast<long>(std::ceil(r - 1e-12)));
}

inline MeasurementPlan make_measurement_plan(double delta, double failure_prob) {
    return MeasurementPlan{delta, failure_prob, chernoff_repetitions(delta, failure_prob)};
}

struct BasisProbabilities {
    double pX_plus;  // P(|+>) = (1 + Re inner)/2
    double pY_plus;  // P((|0>+i|1>)/sqrt2) = (1 - Im inner)/2
};

/// Measurement statistics of the control qubit given the branch overlap.
/// For an ideal inner = e^{i Gamma}: pX_plus = cos^2(Gamma/2).
inline BasisProbabilities measurement_probabilities(Complex inner) {
    if (std::abs(inner) > 1.0 + 1e-9)
        throw NonPhysicalOverlap("|inner| = " + std::to_string(std::abs(inner)) + " > 1");
    auto clamp01 = [](double p) { return std::min(1.0, std::max(0.0, p)); };
    return BasisProbabilities{clamp01(0.5 * (1.0 + inner.real())),
                              clamp01(0.5 * (1.0 - inner.imag()))};
}

struct SampleCounts {
    double qX;
    double qY;
};

/// R Bernoulli draws per basis from the deterministic stream
/// (seed, basis, repetition); returns the empirical frequencies.
inline SampleCounts sample_counts(double pX, double pY, const MeasurementPlan& plan,
                                  std::uint64_t seed) {
    if (!(pX >= 0.0 && pX <= 1.0 && pY >= 0.0 && pY <= 1.0))
        throw ParameterOutOfRange("probabilities must lie in [0, 1]");
    if (plan.repetitions < 1) throw ParameterOutOfRange("need at least one repetition");
    const long R = plan.repetitions;
    long hitsX = 0, hitsY = 0;
    for (long r = 0; r < R; ++r) {
        if (rng::uniform53(rng::derive(seed, 0, static_cast<std::uint64_t>(r))) < pX) ++hitsX;
        if (rng::uniform53(rng::derive(seed, 1, static_cast<std::uint64_t>(r))) < pY) ++hitsY;
    }
    return SampleCounts{static_cast<double>(hitsX) / static_cast<double>(R),
                        static_cast<double>(hitsY) / static_cast<double>(R)};
}

/// Stage estimate of 2^j alpha mod 1, rounded to the eighths grid.
struct EtaEstimate {
    int stage_j = 1;
    int eta_eighths = 0;      // eta = eta_eighths / 8
    double raw_phase = 0.0;   // pre-rounding estimate in [0, 1)
    bool low_confidence = false;

    double eta() const { return static_cast<double>(eta_eighths) / 8.0; }
};

/// Nearest point of {0, 1/8, ..., 7/8} under circular distance, as a count
/// of eighths; exact ties round to the smaller grid value.
inline int round_phase_to_eighths(double raw) {
    int best = 0;
    double best_d = 2.0;
    for (int k = 0; k < 8; ++k) {
        const double d = circular_distance(raw, static_cast<double>(k) / 8.0);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

/// Reconstructs the stage phase from the two quadratures and rounds to the
/// nearest eighth.
inline EtaEstimate estimate_eta(double qX, double qY, int stage_j) {
    if (!(qX >= 0.0 && qX <= 1.0 && qY >= 0.0 && qY <= 1.0))
        throw ParameterOutOfRange("frequencies must lie in [0, 1]");
    if (stage_j < 1) throw ParameterOutOfRange("stage index must be >= 1");
    const double c = 2.0 * qX - 1.0;
    const double s = 1.0 - 2.0 * qY;
    EtaEstimate est;
    est.stage_j = stage_j;
    if (c == 0.0 && s == 0.0) {
        est.low_confidence = true;  // phase undefined at the origin
        return est;
    }
    double raw = std::atan2(s, c) / (2.0 * kPi);
    raw -= std::floor(raw);
    if (raw >= 1.0) raw = 0.0;
    est.raw_phase = raw;
    est.eta_eighths = round_phase_to_eighths(raw);
    return est;
}

/// Recovered binary expansion of alpha.
struct AlphaEstimate {
    std::vector<int> bits;  // bits[j-1] = alpha_j, j = 1..m+1, alpha_1 = 0
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 2;  // 2^{m+1}
    int m = 1;
    double epsilon = 0.5;  // 2^{-m}
    bool ambiguous = false;

    double value() const {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

/// Most-significant-stage-first bit recovery. The window of three bits
/// tracking 2^j alpha mod 1 is seeded from eta_m's eighths expansion; each
/// earlier stage picks the bit whose three-bit candidate is circularly
/// closest to eta_j. All distances are exact in integer eighths.
/// Correct whenever every |eta_j - 2^j alpha|_1 < 1/8.
inline AlphaEstimate recover_bits(const std::vector<EtaEstimate>& etas) {
    const int m = static_cast<int>(etas.size());
    if (m < 1) throw ParameterOutOfRange("need at least one stage estimate");
    if (m > 62) throw ParameterOutOfRange("too many stages");
    for (int i = 0; i < m; ++i)
        if (etas[i].stage_j != i + 1)
            throw ParameterOutOfRange("stage estimates must be ordered j = 1..m");

    AlphaEstimate out;
    out.m = m;
    out.epsilon = std::ldexp(1.0, -m);

    // window (w1, w2) = the two highest of the three eighths bits of the
    // running estimate; the 1/8 bit never influences a candidate choice
    const int em = etas[m - 1].eta_eighths;
    int w1 = (em >> 2) & 1, w2 = (em >> 1) & 1;
    std::vector<int> collected;  // alpha_{m+1}, alpha_m, ..., alpha_2
    collected.reserve(m);
    collected.push_back(w1);

    auto dist8 = [](int a, int b) {  // circular distance in eighth-units
        const int d = ((a - b) % 8 + 8) % 8;
        return std::min(d, 8 - d);
    };

    for (int j = m - 1; j >= 1; --j) {
        const int target = etas[j - 1].eta_eighths;
        const int d0 = dist8(2 * w1 + w2, target);      // candidate 0.0 w1 w2
        const int d1 = dist8(4 + 2 * w1 + w2, target);  // candidate 0.1 w1 w2
        int b = 0;
        if (d0 == d1) {
            out.ambiguous = true;  // both candidates at distance exactly 1/4
        } else {
            b = (d1 < d0) ? 1 : 0;
        }
        w2 = w1;
        w1 = b;
        collected.push_back(b);
    }

    out.bits.assign(m + 1, 0);  // bits[0] = alpha_1 = 0
    for (int i = 0; i < m; ++i) out.bits[m - i] = collected[static_cast<std::size_t>(i)];
    out.denominator = std::uint64_t{1} << (m + 1);
    out.numerator = 0;
    for (int j = 1; j <= m + 1; ++j)
        out.numerator |= static_cast<std::uint64_t>(out.bits[j - 1]) << (m + 1 - j);
    return out;
}

}  // namespace aqc
