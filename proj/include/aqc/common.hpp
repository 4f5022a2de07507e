#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace aqc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPowerOfTwoDomain : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct AlphaTooLarge : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct AlphaOutOfRange : Error { using Error::Error; };
struct ParameterOutOfRange : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct CostGuardExceeded : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct TooFewSteps : Error { using Error::Error; };
struct NonPhysicalOverlap : Error { using Error::Error; };
struct GuardExceeded : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Amplitude pair on the invariant basis {|0^>, |1^>} of the computing register.
struct SubspaceState {
    Complex x{1.0, 0.0};
    Complex y{0.0, 0.0};

    double norm() const { return std::sqrt(std::norm(x) + std::norm(y)); }
};

inline Complex subspace_overlap(const SubspaceState& bra, const SubspaceState& ket) {
    return std::conj(bra.x) * ket.x + std::conj(bra.y) * ket.y;
}

/// Nearest-zero representative of an angle, in [-pi, pi].
inline double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

inline void require_alpha_range(double alpha) {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw AlphaOutOfRange("alpha must lie in [0, 1/2), got " + std::to_string(alpha));
}

}  // namespace aqc
