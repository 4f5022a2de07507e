#include <catch2/catch_amalgamated.hpp>

#include "aqc/closed_form.hpp"
#include "aqc/hamiltonian.hpp"

using namespace aqc;
using Catch::Approx;

TEST_CASE("solution coefficients") {
    SECTION("unmarked database is stationary") {
        const auto sol = solve_closed_form(0.0, 0.1);
        REQUIRE(sol.E == Approx(0.9).margin(1e-15));
        REQUIRE(sol.omega1 == Approx(0.5).margin(1e-15));
        REQUIRE(sol.omega2 == Approx(-0.4).margin(1e-15));
        REQUIRE(sol.lambda == 0.0);
        REQUIRE(sol.A == Approx(1.0).margin(1e-14));
        REQUIRE(sol.B == Approx(0.0).margin(1e-15));
        REQUIRE(sol.C == 0.0);
        REQUIRE(sol.D == 0.0);
    }

    SECTION("initial-state split") {
        const auto sol = solve_closed_form(0.3, 0.02);
        REQUIRE(sol.A + sol.B == Approx(std::sqrt(0.7)).margin(1e-12));
        REQUIRE(sol.C + sol.D == Approx(std::sqrt(0.3)).margin(1e-12));
    }

    SECTION("both printed forms agree") {
        const auto sol = solve_closed_form(0.25, 0.01);
        const auto lam = lambda_form_coefficients(0.25, 0.01);
        REQUIRE(std::abs(sol.A - lam[0]) < 1e-10);
        REQUIRE(std::abs(sol.B - lam[1]) < 1e-10);
        REQUIRE(std::abs(sol.C - lam[2]) < 1e-10);
        REQUIRE(std::abs(sol.D - lam[3]) < 1e-10);
    }

    SECTION("structural identities on a grid") {
        for (double alpha : {0.0, 0.05, 0.2, 0.35, 0.45}) {
            for (double omega : {0.005, 0.05, 0.2, 0.45}) {
                const auto s = solve_closed_form(alpha, omega);
                REQUIRE(s.omega1 - s.omega2 == Approx(s.E).margin(1e-12));
                REQUIRE(s.omega1 + s.omega2 == Approx(s.omega).margin(1e-12));
                REQUIRE(s.A + s.B == Approx(std::sqrt(s.beta)).margin(1e-12));
                REQUIRE(s.C + s.D == Approx(std::sqrt(s.alpha)).margin(1e-12));
                if (s.A != 0.0 && s.C != 0.0) {
                    REQUIRE(s.D / s.A == Approx(s.lambda).margin(1e-10));
                    REQUIRE(-s.B / s.C == Approx(s.lambda).margin(1e-10));
                }
            }
        }
    }

    REQUIRE_THROWS_AS(solve_closed_form(0.5, 0.1), ParameterOutOfRange);
    REQUIRE_THROWS_AS(solve_closed_form(0.2, 0.6), ParameterOutOfRange);
    REQUIRE_THROWS_AS(solve_closed_form(0.2, 0.0), ParameterOutOfRange);
}

TEST_CASE("time evolution") {
    SECTION("starts from the uniform state") {
        const auto sol = solve_closed_form(0.3, 0.02);
        for (bool rev : {false, true}) {
            const auto s = evolve_closed_form(sol, 0.0, rev);
            REQUIRE(std::abs(s.x - std::sqrt(0.7)) < 1e-14);
            REQUIRE(std::abs(s.y - std::sqrt(0.3)) < 1e-14);
        }
    }

    SECTION("alpha = 0 only turns a phase") {
        const auto sol = solve_closed_form(0.0, 0.1);
        const auto s = evolve_closed_form(sol, 17.3, false);
        REQUIRE(std::abs(std::abs(s.x) - 1.0) < 1e-12);
        REQUIRE(std::abs(s.y) == 0.0);
    }

    SECTION("unitary for both orientations") {
        const auto sol = solve_closed_form(0.35, 0.04);
        for (bool rev : {false, true})
            for (double t : {0.3, 7.0, 100.0, 2.0 * kPi / 0.04})
                REQUIRE(evolve_closed_form(sol, t, rev).norm() == Approx(1.0).margin(1e-10));
    }

    SECTION("satisfies the equation of motion") {
        const auto sol = solve_closed_form(0.3, 0.05);
        const double t = 40.0, h = 1e-5;
        for (bool rev : {false, true}) {
            const auto sp = evolve_closed_form(sol, t + h, rev);
            const auto sm = evolve_closed_form(sol, t - h, rev);
            const auto st = evolve_closed_form(sol, t, rev);
            const Complex iu{0.0, 1.0};
            const Complex dx = iu * (sp.x - sm.x) / (2.0 * h);
            const Complex dy = iu * (sp.y - sm.y) / (2.0 * h);
            const double sgn = rev ? -1.0 : 1.0;
            const auto hm = hamiltonian_2x2(0.3, sgn * 0.05 * t);
            const Eigen::Vector2cd hv = hm * Eigen::Vector2cd(st.x, st.y);
            REQUIRE(std::hypot(std::abs(dx - hv(0)), std::abs(dy - hv(1))) < 1e-6);
        }
    }

    REQUIRE_THROWS_AS(evolve_closed_form(solve_closed_form(0.2, 0.1), -1.0, false),
                      ParameterOutOfRange);
}

TEST_CASE("branch overlap report") {
    SECTION("alpha = 0 has unit overlap and no phase") {
        const auto rep = overlap_report(0.0, 0.02, 2.0 * kPi / 0.02);
        REQUIRE(std::abs(rep.inner - Complex{1.0, 0.0}) < 1e-12);
        REQUIRE(std::abs(rep.arg_phase) < 1e-12);
        REQUIRE(rep.p_success == Approx(1.0).margin(1e-12));
    }

    SECTION("phase error and success probability bounds at one winding") {
        const double alpha = 0.25, omega = 0.02;
        const double beta = 1.0 - alpha;
        const auto rep = overlap_report(alpha, omega, 2.0 * kPi / omega);
        const double slack = 8.0 * alpha * beta * omega * omega + 50.0 * omega * omega * omega;
        REQUIRE(std::abs(wrap_angle(rep.arg_phase - rep.mu1)) <= slack);
        REQUIRE(1.0 - rep.p_success <= slack);
    }

    SECTION("report invariants") {
        for (double alpha : {0.1, 0.3, 0.45}) {
            for (double omega : {0.01, 0.05}) {
                const auto rep = overlap_report(alpha, omega, 2.0 * kPi / omega);
                REQUIRE(rep.p_success >= 0.5);
                REQUIRE(rep.p_success <= 1.0);
                REQUIRE(std::norm(rep.inner) + rep.leak_magnitude * rep.leak_magnitude ==
                        Approx(1.0).margin(1e-12));
                REQUIRE(rep.mu2 > 0.0);
            }
        }
    }

    SECTION("mu1 is unreduced and linear in T") {
        const double alpha = 0.3, omega = 0.02;
        const double T = 2.0 * kPi / omega;
        const auto r1 = overlap_report(alpha, omega, T);
        const auto r2 = overlap_report(alpha, omega, 2.0 * T);
        REQUIRE(r2.mu1 == Approx(2.0 * r1.mu1).epsilon(1e-12));
    }

    REQUIRE_THROWS_AS(overlap_report(0.25, 0.02, 0.0), ParameterOutOfRange);
}

TEST_CASE("interference products") {
    SECTION("alpha = 0 is exactly (1, 0, 0, 0)") {
        const auto p = perturbative_coefficients(0.0, 0.01);
        REQUIRE(p[0] == Approx(1.0).margin(1e-13));
        REQUIRE(p[1] == 0.0);
        REQUIRE(p[2] == 0.0);
        REQUIRE(p[3] == 0.0);
    }

    SECTION("small-omega limits at 5%") {
        for (double alpha : {0.1, 0.3}) {
            const double beta = 1.0 - alpha;
            const double omega = 0.005;
            const double w2 = omega * omega;
            const auto p = perturbative_coefficients(alpha, omega);
            REQUIRE((p[0] - 1.0) / w2 == Approx(-3.0 * alpha * beta).epsilon(0.05));
            REQUIRE(p[1] / w2 == Approx(-alpha * beta).epsilon(0.05));
            REQUIRE(p[2] / w2 == Approx(2.0 * alpha * beta).epsilon(0.05));
            REQUIRE(p[3] / w2 == Approx(2.0 * alpha * beta).epsilon(0.05));
        }
    }

    SECTION("residuals shrink at least cubically under omega halving") {
        const double alpha = 0.3, beta = 0.7;
        auto resid = [&](double w) {
            const auto p = perturbative_coefficients(alpha, w);
            return std::array<double, 2>{std::abs(p[0] - 1.0 + 3.0 * alpha * beta * w * w),
                                         std::abs(p[2] - 2.0 * alpha * beta * w * w)};
        };
        const auto r1 = resid(0.01);
        const auto r2 = resid(0.005);
        // the symmetric product is even in omega (factor ~16); the
        // asymmetric one carries a genuine cubic term (factor ~8)
        REQUIRE(r1[0] / r2[0] > 6.0);
        REQUIRE(r1[0] / r2[0] < 24.0);
        REQUIRE(r1[1] / r2[1] > 6.0);
        REQUIRE(r1[1] / r2[1] < 24.0);
    }
}

TEST_CASE("mu1 expansion remainder") {
    SECTION("alpha = 0 leaves no residual phase at full windings") {
        for (int j : {1, 2, 3}) REQUIRE(mu1_expansion_check(0.0, 0.01, j) < 1e-12);
    }

    SECTION("relative remainder is bounded across a halving sequence") {
        for (double alpha : {0.25, 0.3}) {
            double prev = -1.0;
            for (double omega : {0.02, 0.01, 0.005}) {
                const double rel = mu1_expansion_check(alpha, omega, 2);
                REQUIRE(rel < 0.5);
                if (prev >= 0.0) REQUIRE(rel < 2.0 * prev + 1e-9);
                prev = rel;
            }
        }
    }

    REQUIRE_THROWS_AS(mu1_expansion_check(0.2, 0.01, 0), ParameterOutOfRange);
}

TEST_CASE("shared denominator limit") {
    for (double alpha : {0.1, 0.25, 0.4}) {
        const double beta = 1.0 - alpha;
        for (double omega : {0.02, 0.01, 0.005}) {
            const double E = std::sqrt((1 - omega) * (1 - omega) + 4 * alpha * omega);
            const double Ep = std::sqrt((1 + omega) * (1 + omega) - 4 * alpha * omega);
            const double F =
                ((1 - omega) * (1 - omega) + 4 * alpha * omega + (1 - 2 * alpha - omega) * E) *
                ((1 + omega) * (1 + omega) - 4 * alpha * omega + (1 - 2 * alpha + omega) * Ep);
            const double target = 1.0 - 2.0 * beta * (1.0 - 4.0 * alpha) * omega * omega;
            REQUIRE(std::abs(F / (4.0 * beta * beta) - target) < 0.1 * omega * omega * omega);
        }
    }
}
