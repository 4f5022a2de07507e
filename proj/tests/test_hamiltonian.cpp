#include <catch2/catch_amalgamated.hpp>

#include "aqc/hamiltonian.hpp"

using namespace aqc;
using Catch::Approx;

namespace {

// independent 2x2 Hermitian eigenvalues via the characteristic polynomial
std::pair<double, double> eigenvalues_2x2(const Eigen::Matrix2cd& h) {
    const double tr = h.trace().real();
    const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

}  // namespace

TEST_CASE("schedule weights") {
    const auto w0 = schedule_weights(0.0);
    REQUIRE(w0.s0 == 1.0);
    REQUIRE(w0.s1 == 0.0);
    REQUIRE(w0.s2 == 0.0);
    REQUIRE(w0.s3 == 0.0);

    const auto wq = schedule_weights(kPi / 2.0);
    REQUIRE(wq.s0 == Approx(0.5).margin(1e-15));
    REQUIRE(wq.s1 == Approx(0.5).margin(1e-15));
    REQUIRE(wq.s2 == Approx(0.5).margin(1e-15));
    REQUIRE(wq.s3 == Approx(-0.5).margin(1e-15));

    REQUIRE(schedule_weights(1.234).sum() == Approx(1.0).margin(1e-12));
    for (int i = 0; i < 257; ++i)
        REQUIRE(schedule_weights(-2 * kPi + i * 0.05).sum() == Approx(1.0).margin(1e-12));
}

TEST_CASE("two-level Hamiltonian") {
    SECTION("alpha = 1/4 at theta = 0") {
        const auto h = hamiltonian_2x2(0.25, 0.0);
        REQUIRE(h(0, 0).real() == Approx(0.25).margin(1e-15));
        REQUIRE(h(1, 1).real() == Approx(0.75).margin(1e-15));
        REQUIRE(h(0, 1).real() == Approx(-std::sqrt(3.0) / 4.0).margin(1e-15));
        REQUIRE(h(0, 1).imag() == 0.0);
        REQUIRE(h(1, 0) == std::conj(h(0, 1)));
    }

    SECTION("alpha = 0 is diag(0, 1)") {
        const auto h = hamiltonian_2x2(0.0, 1.9);
        REQUIRE((h - Eigen::Vector2cd(0.0, 1.0).asDiagonal().toDenseMatrix()).norm() == 0.0);
    }

    SECTION("spectrum {0, 1}") {
        const auto [lo, hi] = eigenvalues_2x2(hamiltonian_2x2(0.3, 0.7));
        REQUIRE(lo == Approx(0.0).margin(1e-12));
        REQUIRE(hi == Approx(1.0).margin(1e-12));
    }

    SECTION("projector complement on a grid") {
        for (double alpha : {0.0, 0.1, 0.2, 0.3, 0.4}) {
            for (int i = 0; i < 32; ++i) {
                const double theta = 2.0 * kPi * i / 32.0;
                const auto h = hamiltonian_2x2(alpha, theta);
                REQUIRE((h - h.adjoint()).norm() < 1e-12);
                REQUIRE((h * h - h).norm() < 1e-10);
                const auto g = ground_state(alpha, theta);
                REQUIRE((h * Eigen::Vector2cd(g.x, g.y)).norm() < 1e-12);
                const auto [lo, hi] = eigenvalues_2x2(h);
                if (alpha > 0.0) REQUIRE(hi - lo == Approx(1.0).margin(1e-10));
            }
        }
    }

    REQUIRE_THROWS_AS(hamiltonian_2x2(0.5, 0.0), AlphaOutOfRange);
    REQUIRE_THROWS_AS(hamiltonian_2x2(-0.01, 0.0), AlphaOutOfRange);
}

TEST_CASE("ground state") {
    SECTION("theta = 0 reproduces the uniform state in plane coordinates") {
        const auto g = ground_state(0.25, 0.0);
        REQUIRE(g.x.real() == Approx(std::sqrt(0.75)).margin(1e-15));
        REQUIRE(g.y.real() == Approx(0.5).margin(1e-15));
        REQUIRE(g.y.imag() == 0.0);
    }
    SECTION("theta = pi flips the marked amplitude") {
        const auto g = ground_state(0.25, kPi);
        REQUIRE(g.x.real() == Approx(std::sqrt(3.0) / 2.0).margin(1e-15));
        REQUIRE(g.y.real() == Approx(-0.5).margin(1e-12));
        REQUIRE(std::abs(g.y.imag()) < 1e-15);
    }
    SECTION("annihilated by the matrix") {
        const auto g = ground_state(0.3, 2.1);
        const auto h = hamiltonian_2x2(0.3, 2.1);
        REQUIRE((h * Eigen::Vector2cd(g.x, g.y)).norm() < 1e-12);
    }
}

TEST_CASE("full-register Hamiltonian") {
    SECTION("theta = 0 collapses to the uniform-state projector complement") {
        const auto db = create_database(2, {1});
        const Vector psi0 = psi_k(db, 0);
        const Matrix h0 = Matrix::Identity(4, 4) - psi0 * psi0.adjoint();
        REQUIRE((hamiltonian_full(db, 0.0, false) - h0).norm() < 1e-14);
    }

    SECTION("weighted oracle sum equals the projector form") {
        const auto db = create_database(3, {1, 4, 6});
        const double theta = 0.9;
        const Matrix lhs = hamiltonian_full(db, theta, false);
        const Vector psi = embed_subspace(db, ground_state(db.alpha(), theta));
        const Matrix rhs = Matrix::Identity(8, 8) - psi * psi.adjoint();
        REQUIRE((lhs - rhs).norm() < 1e-12);
    }

    SECTION("controlled blocks carry opposite orientations") {
        const auto db = create_database(2, {1});
        const double theta = 1.3;
        const Matrix hc = hamiltonian_full(db, theta, true);
        REQUIRE((hc.topLeftCorner(4, 4) - hamiltonian_full(db, theta, false)).norm() == 0.0);
        REQUIRE((hc.bottomRightCorner(4, 4) - hamiltonian_full(db, -theta, false)).norm() == 0.0);
        REQUIRE(hc.topRightCorner(4, 4).norm() == 0.0);
        REQUIRE(hc.bottomLeftCorner(4, 4).norm() == 0.0);
    }

    SECTION("controlled form is capped at N = 64") {
        const auto db = create_database(7, {0});
        REQUIRE_THROWS_AS(hamiltonian_full(db, 0.1, true), DimensionTooLarge);
        REQUIRE_NOTHROW(hamiltonian_full(db, 0.1, false));
    }
}

TEST_CASE("exact Berry phase") {
    const auto r1 = berry_phase_exact(0.25, 1);
    REQUIRE(r1.gamma == Approx(kPi / 2.0).margin(1e-15));
    REQUIRE(r1.big_gamma == Approx(kPi).margin(1e-15));
    REQUIRE(r1.winding == 2.0 * kPi);

    REQUIRE(berry_phase_exact(0.0, 5).gamma == 0.0);

    const auto r3 = berry_phase_exact(0.3125, 3);
    REQUIRE(r3.gamma == Approx(2.5 * kPi).margin(1e-14));
    REQUIRE(r3.big_gamma == Approx(5.0 * kPi).margin(1e-14));
    REQUIRE(r3.big_gamma == 2.0 * r3.gamma);

    REQUIRE_THROWS_AS(berry_phase_exact(0.25, 0), ParameterOutOfRange);
    REQUIRE_THROWS_AS(berry_phase_exact(0.6, 1), AlphaOutOfRange);
}
