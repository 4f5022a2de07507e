#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aqc/common.hpp"

namespace aqc {

// Largest register size for which dense statevectors are materialized.
inline constexpr int kMaxDenseQubits = 20;

/// A counting instance: N = 2^n items, a sorted set of marked indices, and
/// the fraction alpha = M/N held exactly as the integer pair (M, N).
struct MarkedDatabase {
    int n = 1;
    std::vector<std::uint64_t> marked;  // sorted, no duplicates, all < N

    std::uint64_t size() const { return std::uint64_t{1} << n; }
    std::uint64_t marked_count() const { return marked.size(); }

    // The single rational-to-float conversion site; every analytic formula
    // downstream receives alpha/beta through these.
    double alpha() const {
        return static_cast<double>(marked_count()) / static_cast<double>(size());
    }
    double beta() const {
        return static_cast<double>(size() - marked_count()) / static_cast<double>(size());
    }

    bool is_marked(std::uint64_t s) const {
        return std::binary_search(marked.begin(), marked.end(), s);
    }
};

inline MarkedDatabase create_database(int n, std::vector<std::uint64_t> marked) {
    if (n < 1 || n > 62)
        throw NonPowerOfTwoDomain("qubit count must lie in [1, 62], got " + std::to_string(n));
    const std::uint64_t N = std::uint64_t{1} << n;
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    for (std::uint64_t s : marked)
        if (s >= N)
            throw IndexOutOfRange("marked index " + std::to_string(s) + " >= N = " +
                                  std::to_string(N));
    if (2 * marked.size() >= N)
        throw AlphaTooLarge("need M < N/2, got M = " + std::to_string(marked.size()) +
                            " with N = " + std::to_string(N));
    return MarkedDatabase{n, std::move(marked)};
}

namespace detail {

inline void require_dense(const MarkedDatabase& db) {
    if (db.n > kMaxDenseQubits)
        throw DimensionTooLarge("dense statevector limited to n <= " +
                                std::to_string(kMaxDenseQubits));
}

inline void require_length(const MarkedDatabase& db, const Vector& v) {
    if (static_cast<std::uint64_t>(v.size()) != db.size())
        throw LengthMismatch("state length " + std::to_string(v.size()) +
                             " does not match N = " + std::to_string(db.size()));
}

}  // namespace detail

/// sqrt(beta)|0^> + (-i)^k sqrt(alpha)|1^>, expanded over the item basis.
/// k = 0 is the uniform superposition; k is periodic mod 4.
inline Vector psi_k(const MarkedDatabase& db, int k) {
    detail::require_dense(db);
    static const Complex kOraclePhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const Complex ph = kOraclePhase[((k % 4) + 4) % 4];
    const std::uint64_t N = db.size();
    const double amp = 1.0 / std::sqrt(static_cast<double>(N));
    Vector v(N);
    for (std::uint64_t s = 0; s < N; ++s) v[s] = amp;
    for (std::uint64_t s : db.marked) v[s] = ph * amp;
    return v;
}

/// Multiplies every marked amplitude by exp(-i pi/2) = -i.
inline Vector apply_phase_oracle(const MarkedDatabase& db, const Vector& v) {
    detail::require_length(db, v);
    Vector out = v;
    const Complex minus_i{0.0, -1.0};
    for (std::uint64_t s : db.marked) out[s] *= minus_i;
    return out;
}

/// True iff a and b agree up to a global phase. The phase is fixed on the
/// largest-magnitude amplitude of a.
inline bool equal_up_to_global_phase(const Vector& a, const Vector& b, double tol) {
    if (a.size() != b.size()) return false;
    Eigen::Index imax = 0;
    a.cwiseAbs().maxCoeff(&imax);
    if (std::abs(a[imax]) < tol) return (a - b).norm() <= tol;
    Complex ph = b[imax] / a[imax];
    const double mag = std::abs(ph);
    if (mag < tol) return false;
    ph /= mag;
    return (a * ph - b).norm() <= tol;
}

/// Runs the reversible 3-register oracle |x>|y>|z> -> |x>|y^f(x)>|z^(y f(x))>
/// on v tensored with the auxiliary pair (|0>+i|1>)/sqrt2 (x) (|0>-|1>)/sqrt2,
/// factors the auxiliary registers back off, and reports whether the residual
/// computing-register state equals the phase oracle's output up to global phase.
inline bool kickback_equivalence_check(const MarkedDatabase& db, const Vector& v) {
    detail::require_length(db, v);
    const std::uint64_t N = db.size();
    const Complex aux[4] = {{0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}};

    // index layout: 4x + 2y + z
    Vector state(4 * N);
    for (std::uint64_t x = 0; x < N; ++x)
        for (int yz = 0; yz < 4; ++yz) state[4 * x + yz] = v[x] * aux[yz];

    Vector mapped = Vector::Zero(4 * N);
    for (std::uint64_t x = 0; x < N; ++x) {
        const int f = db.is_marked(x) ? 1 : 0;
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                mapped[4 * x + 2 * (y ^ f) + (z ^ (y & f))] = state[4 * x + 2 * y + z];
    }

    Vector out(N);
    for (std::uint64_t x = 0; x < N; ++x) {
        Complex acc{0.0, 0.0};
        for (int yz = 0; yz < 4; ++yz) acc += std::conj(aux[yz]) * mapped[4 * x + yz];
        out[x] = acc;
    }

    // the auxiliary registers must come back unentangled
    double residual2 = 0.0;
    for (std::uint64_t x = 0; x < N; ++x)
        for (int yz = 0; yz < 4; ++yz)
            residual2 += std::norm(mapped[4 * x + yz] - out[x] * aux[yz]);
    if (std::sqrt(residual2) > 1e-12) return false;

    return equal_up_to_global_phase(out, apply_phase_oracle(db, v), 1e-12);
}

struct SubspaceProjection {
    SubspaceState state;      // renormalized in-plane component
    double leakage = 0.0;     // norm of the component outside span{|0^>, |1^>}
    bool degenerate = false;  // M = 0: |1^> undefined, y reported as 0
};

inline SubspaceProjection project_to_subspace(const MarkedDatabase& db, const Vector& v) {
    detail::require_length(db, v);
    const std::uint64_t N = db.size();
    const std::uint64_t M = db.marked_count();

    Complex x{0.0, 0.0};
    Complex y{0.0, 0.0};
    {
        Complex marked_sum{0.0, 0.0};
        Complex total{0.0, 0.0};
        for (std::uint64_t s = 0; s < N; ++s) total += v[s];
        for (std::uint64_t s : db.marked) marked_sum += v[s];
        x = (total - marked_sum) / std::sqrt(static_cast<double>(N - M));
        if (M > 0) y = marked_sum / std::sqrt(static_cast<double>(M));
    }

    SubspaceProjection proj;
    proj.degenerate = (M == 0);
    {
        // explicit residual; a norm difference would lose half the digits
        const Complex x_amp = x / std::sqrt(static_cast<double>(N - M));
        const Complex y_amp = (M > 0) ? y / std::sqrt(static_cast<double>(M)) : Complex{0, 0};
        double resid2 = 0.0;
        for (std::uint64_t s = 0; s < N; ++s)
            resid2 += std::norm(v[s] - (db.is_marked(s) ? y_amp : x_amp));
        proj.leakage = std::sqrt(resid2);
    }
    const double in_plane2 = std::norm(x) + std::norm(y);
    const double r = std::sqrt(in_plane2);
    if (r > 1e-12)
        proj.state = SubspaceState{x / r, y / r};
    else
        proj.state = SubspaceState{{0.0, 0.0}, {0.0, 0.0}};
    return proj;
}

/// x|0^> + y|1^> over the item basis.
inline Vector embed_subspace(const MarkedDatabase& db, const SubspaceState& s) {
    detail::require_dense(db);
    const std::uint64_t N = db.size();
    const std::uint64_t M = db.marked_count();
    if (M == 0 && std::abs(s.y) > 1e-12)
        throw ParameterOutOfRange("cannot embed onto |1^>: database has no marked items");
    Vector v = Vector::Constant(N, s.x / std::sqrt(static_cast<double>(N - M)));
    if (M > 0) {
        const Complex ym = s.y / std::sqrt(static_cast<double>(M));
        for (std::uint64_t idx : db.marked) v[idx] = ym;
    }
    return v;
}

// --- instance file format: line 1 "n=<int>", line 2 "marked=<comma separated>" ---

inline MarkedDatabase read_instance(std::istream& in) {
    auto next_line = [&in](const std::string& key) {
        std::string line;
        if (!std::getline(in, line)) throw IoError("instance file truncated, expected " + key);
        const auto eq = line.find('=');
        if (eq == std::string::npos || line.substr(0, eq) != key)
            throw IoError("instance file: expected '" + key + "=...', got '" + line + "'");
        return line.substr(eq + 1);
    };
    int n = 0;
    try {
        n = std::stoi(next_line("n"));
    } catch (const std::logic_error&) {
        throw IoError("instance file: invalid n");
    }
    std::vector<std::uint64_t> marked;
    std::stringstream items(next_line("marked"));
    std::string tok;
    while (std::getline(items, tok, ',')) {
        if (tok.empty()) continue;
        try {
            marked.push_back(std::stoull(tok));
        } catch (const std::logic_error&) {
            throw IoError("instance file: invalid marked index '" + tok + "'");
        }
    }
    return create_database(n, std::move(marked));
}

inline MarkedDatabase load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    return read_instance(in);
}

inline void write_instance(std::ostream& out, const MarkedDatabase& db) {
    out << "n=" << db.n << "\n";
    out << "marked=";
    for (std::size_t i = 0; i < db.marked.size(); ++i) {
        if (i) out << ",";
        out << db.marked[i];
    }
    out << "\n";
}

}  // namespace aqc
