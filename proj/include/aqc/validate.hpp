#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aqc/closed_form.hpp"
#include "aqc/common.hpp"
#include "aqc/database.hpp"
#include "aqc/estimator.hpp"
#include "aqc/hamiltonian.hpp"
#include "aqc/integrator.hpp"
#include "aqc/scheduler.hpp"

namespace aqc {

enum class ValidateLevel { fast, full };

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::string detail;  // first failing check, empty when passed
};

namespace validate_detail {

struct Checker {
    SuiteResult result;

    explicit Checker(std::string name) { result.name = std::move(name); }

    void expect(bool cond, const std::string& what) {
        if (!cond && result.passed) {
            result.passed = false;
            result.detail = what;
        }
    }
    template <class Fn>
    void expect_no_throw(Fn&& fn, const std::string& what) {
        try {
            fn();
        } catch (const std::exception& e) {
            expect(false, what + ": " + e.what());
        }
    }
};

inline Vector random_unit_vector(Eigen::Index n, std::uint64_t seed) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = rng::uniform53(rng::derive(seed, 2 * i, 17)) - 0.5;
        const double im = rng::uniform53(rng::derive(seed, 2 * i + 1, 17)) - 0.5;
        v[i] = Complex{re, im};
    }
    return v / v.norm();
}

inline double fidelity(const SubspaceState& a, const SubspaceState& b) {
    return std::norm(subspace_overlap(a, b));
}

inline std::vector<EtaEstimate> exact_etas(double alpha, int m) {
    std::vector<EtaEstimate> etas;
    for (int j = 1; j <= m; ++j) {
        double frac = std::fmod(std::ldexp(alpha, j), 1.0);
        EtaEstimate e;
        e.stage_j = j;
        e.raw_phase = frac;
        e.eta_eighths = round_phase_to_eighths(frac);
        etas.push_back(e);
    }
    return etas;
}

}  // namespace validate_detail

inline SuiteResult database_suite(ValidateLevel) {
    using validate_detail::Checker;
    Checker c("database-basics");

    const auto db = create_database(4, {1, 9, 12});
    const Vector zero_hat = embed_subspace(db, SubspaceState{{1, 0}, {0, 0}});
    const Vector one_hat = embed_subspace(db, SubspaceState{{0, 0}, {1, 0}});
    c.expect(std::abs(zero_hat.norm() - 1.0) < 1e-12, "|0^> not unit");
    c.expect(std::abs(one_hat.norm() - 1.0) < 1e-12, "|1^> not unit");
    c.expect(std::abs(zero_hat.dot(one_hat)) < 1e-12, "<0^|1^> != 0");

    Vector v = psi_k(db, 0);
    for (int k = 0; k <= 3; ++k) {
        c.expect((v - psi_k(db, k)).norm() < 1e-12,
                 "psi_k != oracle^k psi_0 at k=" + std::to_string(k));
        v = apply_phase_oracle(db, v);
    }
    c.expect((psi_k(db, 2) - psi_k(db, 6)).norm() < 1e-12, "psi_k not periodic mod 4");

    const Vector r = validate_detail::random_unit_vector(16, 99);
    Vector r4 = r;
    for (int k = 0; k < 4; ++k) r4 = apply_phase_oracle(db, r4);
    c.expect((r4 - r).norm() < 1e-12, "oracle^4 != identity");

    // round trip through the embedding
    SubspaceState s{Complex{0.6, 0.3}, Complex{-0.2, 0.711}};
    const double nrm = s.norm();
    s = SubspaceState{s.x / nrm, s.y / nrm};
    const auto proj = project_to_subspace(db, embed_subspace(db, s));
    c.expect(std::abs(proj.state.x - s.x) < 1e-12 && std::abs(proj.state.y - s.y) < 1e-12,
             "project(embed) round trip failed");
    c.expect(proj.leakage < 1e-12, "round-trip leakage nonzero");

    const auto p2 = project_to_subspace(db, psi_k(db, 2));
    c.expect(std::abs(p2.state.x - std::sqrt(db.beta())) < 1e-12 &&
                 std::abs(p2.state.y + std::sqrt(db.alpha())) < 1e-12,
             "psi_2 projection mismatch");

    // leakage of a state with no overlap on either basis vector
    const auto db4 = create_database(2, {3});
    Vector ortho = Vector::Zero(4);
    ortho[0] = 1.0 / std::sqrt(2.0);
    ortho[1] = -1.0 / std::sqrt(2.0);
    const auto po = project_to_subspace(db4, ortho);
    c.expect(std::abs(po.leakage - 1.0) < 1e-12, "orthogonal vector should leak fully");

    const auto empty = create_database(3, {});
    const auto pd = project_to_subspace(empty, psi_k(empty, 0));
    c.expect(pd.degenerate && std::abs(pd.state.y) == 0.0 && pd.leakage < 1e-12,
             "degenerate projection mishandled");
    return c.result;
}

inline SuiteResult kickback_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("kickback-exhaustive");
    const int n_max = (level == ValidateLevel::full) ? 4 : 3;
    for (int n = 1; n <= n_max; ++n) {
        const std::uint64_t N = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
            if (2ull * static_cast<std::uint64_t>(__builtin_popcountll(mask)) >= N) continue;
            std::vector<std::uint64_t> marked;
            for (std::uint64_t s = 0; s < N; ++s)
                if ((mask >> s) & 1) marked.push_back(s);
            const auto db = create_database(n, marked);
            for (std::uint64_t s = 0; s < N; ++s) {
                Vector basis = Vector::Zero(N);
                basis[s] = 1.0;
                if (!kickback_equivalence_check(db, basis)) {
                    c.expect(false, "kickback failed at N=" + std::to_string(N) + " mask=" +
                                        std::to_string(mask) + " s=" + std::to_string(s));
                    return c.result;
                }
            }
        }
    }
    // seeded random states on a mid-sized instance
    const auto db = create_database(3, {1, 4, 6});
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        c.expect(kickback_equivalence_check(db, validate_detail::random_unit_vector(8, seed)),
                 "kickback failed on random state seed=" + std::to_string(seed));
    return c.result;
}

inline SuiteResult schedule_sum_suite(const std::function<ScheduleWeights(double)>& weights) {
    using validate_detail::Checker;
    Checker c("schedule-sum");
    for (int i = 0; i < 1024; ++i) {
        const double theta = 4.0 * kPi * i / 1024.0 - 2.0 * kPi;
        const ScheduleWeights w = weights(theta);
        if (std::abs(w.sum() - 1.0) > 1e-12) {
            c.expect(false, "weights sum to " + std::to_string(w.sum()) + " at theta=" +
                                std::to_string(theta));
            return c.result;
        }
    }
    const ScheduleWeights w0 = weights(0.0);
    c.expect(w0.s0 == 1.0 && w0.s1 == 0.0 && w0.s2 == 0.0, "weights(0) wrong");
    const ScheduleWeights wq = weights(kPi / 2.0);
    c.expect(std::abs(wq.s0 - 0.5) < 1e-15 && std::abs(wq.s1 - 0.5) < 1e-15 &&
                 std::abs(wq.s2 - 0.5) < 1e-15 && std::abs(wq.s3 + 0.5) < 1e-15,
             "weights(pi/2) wrong");
    return c.result;
}

inline SuiteResult hamiltonian_suite(ValidateLevel) {
    using validate_detail::Checker;
    Checker c("hamiltonian-grid");
    for (double alpha : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        for (int i = 0; i < 32; ++i) {
            const double theta = 2.0 * kPi * i / 32.0;
            const Eigen::Matrix2cd h = hamiltonian_2x2(alpha, theta);
            c.expect((h - h.adjoint()).norm() < 1e-12, "H not Hermitian");
            c.expect((h * h - h).norm() < 1e-10, "H^2 != H");
            // analytic eigenvalues of the 2x2: trace 1, determinant 0
            const double tr = h.trace().real();
            const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
            const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
            const double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
            c.expect(std::abs(lo) < 1e-10 && std::abs(hi - 1.0) < 1e-10, "spectrum not {0,1}");
            if (alpha > 0.0) c.expect(std::abs((hi - lo) - 1.0) < 1e-10, "gap != 1");
            const SubspaceState g = ground_state(alpha, theta);
            const Eigen::Vector2cd gv(g.x, g.y);
            c.expect((h * gv).norm() < 1e-12, "ground state not annihilated");
        }
    }
    return c.result;
}

inline SuiteResult subspace_consistency_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("subspace-consistency");
    const int n_max = (level == ValidateLevel::full) ? 4 : 3;
    for (int n = 2; n <= n_max; ++n) {
        const auto db = create_database(n, n == 2 ? std::vector<std::uint64_t>{1}
                                       : n == 3   ? std::vector<std::uint64_t>{1, 5, 6}
                                                  : std::vector<std::uint64_t>{2, 3, 9, 11, 14});
        for (int i = 0; i < 8; ++i) {
            const double theta = 2.0 * kPi * i / 8.0 + 0.05;
            const Matrix hf = hamiltonian_full(db, theta, false);
            c.expect((hf - hf.adjoint()).norm() < 1e-12, "full H not Hermitian");

            // the weighted oracle combination must collapse to the projector form
            const Vector psi_theta = embed_subspace(db, ground_state(db.alpha(), theta));
            const auto N = static_cast<Eigen::Index>(db.size());
            const Matrix proj_form = Matrix::Identity(N, N) - psi_theta * psi_theta.adjoint();
            c.expect((hf - proj_form).norm() < 1e-12, "sum_k s_k H_k != I - |psi><psi|");

            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const double a = rng::uniform53(rng::derive(seed, 3, 5));
                const double b = rng::uniform53(rng::derive(seed, 4, 5));
                SubspaceState s{std::polar(0.8, 2 * kPi * a), std::polar(0.6, 2 * kPi * b)};
                const Eigen::Vector2cd hs = hamiltonian_2x2(db.alpha(), theta) *
                                            Eigen::Vector2cd(s.x, s.y);
                const Vector lhs = hf * embed_subspace(db, s);
                const Vector rhs = embed_subspace(db, SubspaceState{hs(0), hs(1)});
                c.expect((lhs - rhs).norm() < 1e-12, "full/subspace action mismatch");
            }

            const Matrix hc = hamiltonian_full(db, theta, true);
            c.expect((hc.topLeftCorner(db.size(), db.size()) - hf).norm() < 1e-14 &&
                         (hc.bottomRightCorner(db.size(), db.size()) -
                          hamiltonian_full(db, -theta, false))
                                 .norm() < 1e-14,
                     "controlled blocks wrong");
        }
    }
    return c.result;
}

inline SuiteResult closed_form_suite(ValidateLevel) {
    using validate_detail::Checker;
    Checker c("closed-form-solution");
    for (double alpha : {0.0, 0.1, 0.25, 0.4, 0.45}) {
        for (double omega : {0.005, 0.02, 0.1, 0.3, 0.45}) {
            const auto sol = solve_closed_form(alpha, omega);
            const auto lam = lambda_form_coefficients(alpha, omega);
            c.expect(std::abs(sol.A - lam[0]) < 1e-10 && std::abs(sol.B - lam[1]) < 1e-10 &&
                         std::abs(sol.C - lam[2]) < 1e-10 && std::abs(sol.D - lam[3]) < 1e-10,
                     "E-form vs lambda-form mismatch");
            c.expect(std::abs(sol.A + sol.B - std::sqrt(sol.beta)) < 1e-12, "A+B != sqrt(beta)");
            c.expect(std::abs(sol.C + sol.D - std::sqrt(sol.alpha)) < 1e-12, "C+D != sqrt(alpha)");
            c.expect(std::abs(sol.omega1 - sol.omega2 - sol.E) < 1e-12, "omega1-omega2 != E");
            c.expect(std::abs(sol.omega1 + sol.omega2 - sol.omega) < 1e-12,
                     "omega1+omega2 != omega");
            if (sol.A != 0.0 && sol.C != 0.0) {
                c.expect(std::abs(sol.D / sol.A - sol.lambda) < 1e-10, "D/A != lambda");
                c.expect(std::abs(-sol.B / sol.C - sol.lambda) < 1e-10, "-B/C != lambda");
            }

            const SubspaceState init = evolve_closed_form(sol, 0.0, false);
            c.expect(std::abs(init.x - std::sqrt(sol.beta)) < 1e-12 &&
                         std::abs(init.y - std::sqrt(sol.alpha)) < 1e-12,
                     "t=0 state wrong");

            for (bool rev : {false, true}) {
                for (double t : {1.7, 40.0, 2.0 * kPi / omega}) {
                    const SubspaceState st = evolve_closed_form(sol, t, rev);
                    c.expect(std::abs(st.norm() - 1.0) < 1e-10, "norm drifted");
                    // Schrodinger residual by central differences
                    const double h = 1e-5;
                    const SubspaceState p = evolve_closed_form(sol, t + h, rev);
                    const SubspaceState m = evolve_closed_form(sol, t - h, rev);
                    const Complex iu{0.0, 1.0};
                    const Complex dx = iu * (p.x - m.x) / (2.0 * h);
                    const Complex dy = iu * (p.y - m.y) / (2.0 * h);
                    const double sgn = rev ? -1.0 : 1.0;
                    const Eigen::Matrix2cd hmat = hamiltonian_2x2(alpha, sgn * omega * t);
                    const Eigen::Vector2cd hv = hmat * Eigen::Vector2cd(st.x, st.y);
                    const double resid = std::hypot(std::abs(dx - hv(0)), std::abs(dy - hv(1)));
                    c.expect(resid < 1e-6, "Schrodinger residual " + std::to_string(resid));
                }
            }
        }
    }
    return c.result;
}

inline SuiteResult overlap_suite(ValidateLevel) {
    using validate_detail::Checker;
    Checker c("overlap-consistency");
    for (double alpha : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        for (double omega : {0.005, 0.01, 0.02, 0.035, 0.05}) {
            for (double T : {2.0 * kPi / omega, 37.7}) {
                const auto sol = solve_closed_form(alpha, omega);
                const Complex direct = subspace_overlap(evolve_closed_form(sol, T, true),
                                                        evolve_closed_form(sol, T, false));
                const auto f = detail::raw_solution(alpha, omega);
                const auto r = detail::raw_solution(alpha, -omega);
                const Complex expansion = detail::overlap_via_expansion(
                    f, r, T, 0.5 * (f.E - r.E) * T, 0.5 * (f.E + r.E) * T);
                c.expect(std::abs(direct - expansion) <= 1e-10,
                         "direct vs expansion: " + std::to_string(std::abs(direct - expansion)));
            }
            const auto rep = overlap_report(alpha, omega, 2.0 * kPi / omega);
            c.expect(rep.p_success >= 0.5 && rep.p_success <= 1.0, "p_success range");
            c.expect(std::abs(std::norm(rep.inner) +
                              rep.leak_magnitude * rep.leak_magnitude - 1.0) < 1e-12,
                     "overlap/leak split");
        }
    }
    {
        const auto rep = overlap_report(0.0, 0.02, 2.0 * kPi / 0.02);
        c.expect(std::abs(rep.inner - Complex{1.0, 0.0}) < 1e-12 &&
                     std::abs(rep.arg_phase) < 1e-12 && rep.p_success > 1.0 - 1e-12,
                 "alpha=0 overlap not trivial");
    }

    // interference-product limits and the shared-denominator limit
    for (double alpha : {0.1, 0.25, 0.4}) {
        const double beta = 1.0 - alpha;
        for (double omega : {0.01, 0.005}) {
            const auto p = perturbative_coefficients(alpha, omega);
            const double w2 = omega * omega;
            c.expect(std::abs((p[0] - 1.0) / w2 + 3.0 * alpha * beta) < 0.05 * 3.0 * alpha * beta,
                     "AA'+DD' limit");
            c.expect(std::abs(p[1] / w2 + alpha * beta) < 0.05 * alpha * beta, "BB'+CC' limit");
            c.expect(std::abs(p[2] / w2 - 2.0 * alpha * beta) < 0.05 * 2.0 * alpha * beta,
                     "AB'+C'D limit");
            c.expect(std::abs(p[3] / w2 - 2.0 * alpha * beta) < 0.05 * 2.0 * alpha * beta,
                     "A'B+CD' limit");

            const double E = std::sqrt((1 - omega) * (1 - omega) + 4 * alpha * omega);
            const double Ep = std::sqrt((1 + omega) * (1 + omega) - 4 * alpha * omega);
            const double F = ((1 - omega) * (1 - omega) + 4 * alpha * omega +
                              (1 - 2 * alpha - omega) * E) *
                             ((1 + omega) * (1 + omega) - 4 * alpha * omega +
                              (1 - 2 * alpha + omega) * Ep);
            const double resid =
                std::abs(F / (4 * beta * beta) - (1.0 - 2.0 * beta * (1.0 - 4.0 * alpha) * w2));
            c.expect(resid < 0.1 * omega * omega * omega,
                     "denominator limit residual " + std::to_string(resid));
        }
        // halving omega must shrink the residuals at least cubically
        auto resid_at = [&](double w) {
            const auto p = perturbative_coefficients(alpha, w);
            return std::array<double, 2>{std::abs(p[0] - 1.0 + 3.0 * alpha * beta * w * w),
                                         std::abs(p[2] - 2.0 * alpha * beta * w * w)};
        };
        const auto r1 = resid_at(0.01);
        const auto r2 = resid_at(0.005);
        c.expect(r1[0] / r2[0] > 6.0 && r1[0] / r2[0] < 24.0, "AA'+DD' residual order");
        c.expect(r1[1] / r2[1] > 6.0 && r1[1] / r2[1] < 24.0, "AB'+C'D residual order");

        // relative remainder of the mu1 expansion stays bounded as omega drops
        double prev = -1.0;
        for (double omega : {0.02, 0.01, 0.005}) {
            const double rel = mu1_expansion_check(alpha, omega, 2);
            c.expect(rel < 1.0, "mu1 remainder too large: " + std::to_string(rel));
            if (prev > 0.0) c.expect(rel < 2.0 * prev + 1e-6, "mu1 remainder not bounded");
            prev = rel;
        }
    }
    return c.result;
}

inline SuiteResult integrator_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("integrator-accuracy");

    for (auto [alpha, omega] : {std::pair{0.3, 0.02}, std::pair{0.45, 0.05}}) {
        const double T = 2.0 * kPi / omega;
        const auto sol = solve_closed_form(alpha, omega);
        IntegrationConfig cfg;
        cfg.step = 1e-3;
        for (bool rev : {false, true}) {
            const auto run = integrate_2d_run(alpha, omega, T, rev, cfg);
            c.expect(run.norm_drift <= 1e-9, "norm drift too large");
            const double fid =
                validate_detail::fidelity(run.state, evolve_closed_form(sol, T, rev));
            c.expect(fid >= 1.0 - 1e-8, "fidelity vs closed form: " + std::to_string(fid));
        }
    }

    {  // fourth-order convergence, steps coarse enough for truncation to dominate
        const double alpha = 0.25, omega = 0.05;
        const double T = 2.0 * kPi / omega;
        const auto sol = solve_closed_form(alpha, omega);
        const SubspaceState ref = evolve_closed_form(sol, T, false);
        auto err_at = [&](double h) {
            IntegrationConfig cfg;
            cfg.step = h;
            const SubspaceState s = integrate_2d(alpha, omega, T, false, cfg);
            return std::hypot(std::abs(s.x - ref.x), std::abs(s.y - ref.y));
        };
        const double ratio = err_at(0.05) / err_at(0.025);
        const double order = std::log2(ratio);
        c.expect(order > 3.5 && order < 4.5, "convergence order " + std::to_string(order));
    }

    {  // full-register runs stay in the invariant plane and match the 2-D engine
        const int n_max = (level == ValidateLevel::full) ? 4 : 3;
        for (int n = 2; n <= n_max; ++n) {
            const auto db = create_database(n, n == 2 ? std::vector<std::uint64_t>{1}
                                           : n == 3   ? std::vector<std::uint64_t>{1, 4, 6}
                                                      : std::vector<std::uint64_t>{0, 3, 7, 9, 12});
            const double omega = 0.05;
            const double T = 2.0 * kPi / omega;
            const Vector state = integrate_full(db, omega, T);
            const auto N = static_cast<Eigen::Index>(db.size());
            const Vector b0 = state.head(N) * std::sqrt(2.0);
            const Vector b1 = state.tail(N) * std::sqrt(2.0);
            const auto p0 = project_to_subspace(db, b0);
            const auto p1 = project_to_subspace(db, b1);
            c.expect(p0.leakage <= 1e-9 && p1.leakage <= 1e-9,
                     "subspace leakage " + std::to_string(std::max(p0.leakage, p1.leakage)));
            const SubspaceState f2d = integrate_2d(db.alpha(), omega, T, false);
            const SubspaceState r2d = integrate_2d(db.alpha(), omega, T, true);
            c.expect(validate_detail::fidelity(p0.state, f2d) >= 1.0 - 1e-8,
                     "control-0 block mismatch");
            c.expect(validate_detail::fidelity(p1.state, r2d) >= 1.0 - 1e-8,
                     "control-1 block mismatch");
        }
    }

    {  // Berry connection quadrature
        c.expect(std::abs(numeric_berry_phase(0.25, 1, 10000) - kPi / 2.0) < 1e-6,
                 "berry phase at alpha=1/4");
        c.expect(numeric_berry_phase(0.0, 1, 10000) == 0.0, "berry phase at alpha=0");
        c.expect(std::abs(numeric_berry_phase(0.3125, 4, 10000) - 2.5 * kPi) < 1e-6,
                 "berry phase at alpha=5/16, 4 windings");
    }

    if (level == ValidateLevel::full) {
        // the extracted relative phase is a path property, not a speed property
        const double alpha = 0.25, omega = 0.02;
        const double T = 2.0 * kPi / omega;
        IntegrationConfig cfg;
        cfg.step = 1e-3;
        auto smooth = [T](double t) {
            const double u = t / T;
            return 2.0 * kPi * u * u * (3.0 - 2.0 * u);
        };
        const SubspaceState lf = integrate_2d(alpha, omega, T, false, cfg);
        const SubspaceState lr = integrate_2d(alpha, omega, T, true, cfg);
        const SubspaceState sf = integrate_2d_with_schedule(alpha, smooth, T, false, cfg);
        const SubspaceState sr = integrate_2d_with_schedule(alpha, smooth, T, true, cfg);
        const double arg_lin = std::arg(subspace_overlap(lr, lf));
        const double arg_smooth = std::arg(subspace_overlap(sr, sf));
        const double diff = std::abs(wrap_angle(arg_smooth - arg_lin));
        c.expect(diff <= 20.0 * omega * omega,
                 "schedule dependence " + std::to_string(diff) + " rad");
    }
    return c.result;
}

inline SuiteResult estimator_recovery_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("estimator-recovery");

    // phase reconstruction is exact on the eighths grid
    for (int k = 0; k < 8; ++k) {
        const double gamma = 2.0 * kPi * k / 8.0;
        const EtaEstimate e = estimate_eta(0.5 * (1.0 + std::cos(gamma)),
                                           0.5 * (1.0 - std::sin(gamma)), 1);
        c.expect(circular_distance(e.raw_phase, k / 8.0) < 1e-12,
                 "raw phase off-grid at k=" + std::to_string(k));
        c.expect(e.eta_eighths == k, "eta rounding at k=" + std::to_string(k));
    }

    // exhaustive recovery from exact etas
    const std::vector<int> ns =
        (level == ValidateLevel::full) ? std::vector<int>{3, 4, 5} : std::vector<int>{3, 4};
    const std::vector<int> ms =
        (level == ValidateLevel::full) ? std::vector<int>{3, 4, 5} : std::vector<int>{3, 4};
    for (int n : ns) {
        const std::uint64_t N = std::uint64_t{1} << n;
        for (std::uint64_t M = 0; 2 * M < N; ++M) {
            const double alpha = static_cast<double>(M) / static_cast<double>(N);
            for (int m : ms) {
                const auto est = recover_bits(validate_detail::exact_etas(alpha, m));
                if (std::abs(est.value() - alpha) > std::ldexp(1.0, -m) + 1e-15) {
                    c.expect(false, "recovery failed at N=" + std::to_string(N) + " M=" +
                                        std::to_string(M) + " m=" + std::to_string(m));
                    return c.result;
                }
            }
        }
    }

    // perturbed raw phases within 1/16 still recover within 2^-m
    const long trials = (level == ValidateLevel::full) ? 10000 : 2000;
    for (long t = 0; t < trials; ++t) {
        const std::uint64_t h1 = rng::derive(4242, static_cast<std::uint64_t>(t), 1);
        const int n = 3 + static_cast<int>(h1 % 3);
        const std::uint64_t N = std::uint64_t{1} << n;
        const std::uint64_t M = rng::derive(4242, static_cast<std::uint64_t>(t), 2) % (N / 2);
        const int m = 3 + static_cast<int>(rng::derive(4242, static_cast<std::uint64_t>(t), 3) % 3);
        const double alpha = static_cast<double>(M) / static_cast<double>(N);
        std::vector<EtaEstimate> etas;
        for (int j = 1; j <= m; ++j) {
            const double noise =
                (rng::uniform53(rng::derive(4242, static_cast<std::uint64_t>(t), 100 + j)) - 0.5) /
                8.0001;  // < 1/16 in magnitude
            double raw = std::fmod(std::ldexp(alpha, j) + noise, 1.0);
            if (raw < 0.0) raw += 1.0;
            EtaEstimate e;
            e.stage_j = j;
            e.raw_phase = raw;
            e.eta_eighths = round_phase_to_eighths(raw);
            etas.push_back(e);
        }
        const auto est = recover_bits(etas);
        if (std::abs(est.value() - alpha) > std::ldexp(1.0, -m) + 1e-15) {
            c.expect(false, "perturbed recovery failed at trial " + std::to_string(t));
            return c.result;
        }
    }
    return c.result;
}

inline SuiteResult estimator_sampling_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("estimator-sampling");

    c.expect(chernoff_repetitions(0.25, 0.05) == 30, "chernoff(1/4, 0.05) != 30");
    c.expect(chernoff_repetitions(0.1, 2.5) == 1, "chernoff with failure >= 2");
    long prev = chernoff_repetitions(0.05, 0.1);
    for (double d : {0.1, 0.2, 0.3, 0.4}) {
        const long r = chernoff_repetitions(d, 0.1);
        c.expect(r <= prev, "repetitions not non-increasing in delta");
        prev = r;
    }

    const MeasurementPlan plan{0.22, 0.1, 100};
    const auto a = sample_counts(0.3, 0.8, plan, 777);
    const auto b = sample_counts(0.3, 0.8, plan, 777);
    c.expect(a.qX == b.qX && a.qY == b.qY, "sampling not deterministic");
    const auto one = sample_counts(1.0, 0.0, plan, 31);
    c.expect(one.qX == 1.0 && one.qY == 0.0, "degenerate probabilities mis-sampled");

    // Chernoff envelope at p = 1/2, R = 1e4
    const long seeds = (level == ValidateLevel::full) ? 1000 : 200;
    const MeasurementPlan big{0.02, 0.05, 10000};
    long inside = 0;
    for (long s = 0; s < seeds; ++s) {
        const auto q = sample_counts(0.5, 0.5, big, static_cast<std::uint64_t>(s));
        if (std::abs(q.qX - 0.5) <= 0.02) ++inside;
    }
    c.expect(inside >= (99 * seeds) / 100,
             "only " + std::to_string(inside) + "/" + std::to_string(seeds) + " inside envelope");
    return c.result;
}

inline SuiteResult scheduler_budget_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("scheduler-budget");
    const double grid = (level == ValidateLevel::full) ? 0.01 : 0.05;
    for (int j = 1; j <= 12; ++j) {
        const double omega_j = 0.05 * std::exp2(-0.5 * j);
        for (double alpha = 0.0; alpha < 0.5; alpha += grid) {
            const double bound = delta_bound(alpha, omega_j, j);
            if (!(bound < kDeltaBudget)) {
                c.expect(false, "budget " + std::to_string(bound) + " at alpha=" +
                                    std::to_string(alpha) + " j=" + std::to_string(j));
                return c.result;
            }
        }
    }
    c.expect(delta_bound(0.0, 0.01, 3) == 0.0, "alpha=0 budget nonzero");
    return c.result;
}

inline SuiteResult ledger_suite(ValidateLevel) {
    using validate_detail::Checker;
    Checker c("ledger-exactness");
    for (int m : {4, 8, 12}) {
        const long r0 = chernoff_repetitions(0.22, 0.1 / m);
        const double c_omega = 0.05;
        const auto stages = plan_stages(m, c_omega, r0, r0 / 2.0);
        double total = 0.0;
        double closed = 0.0;
        for (const auto& st : stages) {
            total += 2.0 * static_cast<double>(st.R_j) * st.T_j;
            closed += 2.0 * static_cast<double>(st.R_j) * (kPi / c_omega) *
                      std::exp2(1.5 * static_cast<double>(st.j));
        }
        c.expect(std::abs(total - closed) <= 1e-9 * closed, "ledger total vs closed form");
        for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
            const double ratio = stages[i + 1].T_j / stages[i].T_j;
            c.expect(std::abs(ratio - std::exp2(1.5)) <= 1e-9 * std::exp2(1.5),
                     "stage time ratio != 2^{3/2}");
        }
    }
    {  // doubling the rate constant halves every stage time
        const auto s1 = plan_stages(4, 0.04, 10, 5.0);
        const auto s2 = plan_stages(4, 0.08, 10, 5.0);
        for (int i = 0; i < 4; ++i)
            c.expect(std::abs(s1[i].T_j - 2.0 * s2[i].T_j) < 1e-9 * s1[i].T_j,
                     "T_j not linear in 1/c_omega");
    }
    return c.result;
}

inline SuiteResult mode_equivalence_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("mode-equivalence");
    struct Case {
        int n;
        std::vector<std::uint64_t> marked;
        int m;
    };
    std::vector<Case> cases;
    if (level == ValidateLevel::full) {
        for (std::uint64_t M = 1; M <= 7; ++M) {
            std::vector<std::uint64_t> marked;
            for (std::uint64_t s = 0; s < M; ++s) marked.push_back(s);
            cases.push_back({4, marked, 4});
        }
    } else {
        cases.push_back({3, {0}, 3});
        cases.push_back({3, {0, 1, 2}, 3});
    }
    for (const auto& cs : cases) {
        const auto db = create_database(cs.n, cs.marked);
        const auto closed = run_counting(db, cs.m, EngineMode::closed_form, 7);
        const auto integ = run_counting(db, cs.m, EngineMode::integrate_2d, 7);
        c.expect(closed.alpha_hat.numerator == integ.alpha_hat.numerator &&
                     closed.alpha_hat.denominator == integ.alpha_hat.denominator,
                 "engines disagree at M=" + std::to_string(cs.marked.size()));
        for (std::size_t i = 0; i < closed.stages.size(); ++i)
            c.expect(closed.stages[i].eta == integ.stages[i].eta,
                     "stage eta mismatch at M=" + std::to_string(cs.marked.size()));
    }
    return c.result;
}

inline SuiteResult end_to_end_suite(ValidateLevel level) {
    using validate_detail::Checker;
    Checker c("end-to-end");
    const int trials = (level == ValidateLevel::full) ? 200 : 50;
    for (std::uint64_t M = 0; M <= 7; ++M) {
        std::vector<std::uint64_t> marked;
        for (std::uint64_t s = 0; s < M; ++s) marked.push_back(2 * s);
        const auto db = create_database(4, marked);
        const double alpha = db.alpha();

        const auto exact = recover_bits(validate_detail::exact_etas(alpha, 4));
        c.expect(exact.value() == alpha, "exact-eta pipeline missed M=" + std::to_string(M));

        int hits = 0;
        for (int s = 0; s < trials; ++s) {
            const auto run =
                run_counting(db, 4, EngineMode::closed_form, static_cast<std::uint64_t>(s));
            if (std::abs(run.alpha_hat.value() - alpha) <= 1.0 / 16.0 + 1e-12) ++hits;
        }
        c.expect(2 * hits > trials, "success rate " + std::to_string(hits) + "/" +
                                        std::to_string(trials) + " at M=" + std::to_string(M));
        if (M == 0) {
            const auto run = run_counting(db, 4, EngineMode::closed_form, 123);
            c.expect(run.alpha_hat.numerator == 0, "M=0 must recover 0 deterministically");
        }
    }
    return c.result;
}

inline std::vector<SuiteResult> run_validation(ValidateLevel level) {
    std::vector<SuiteResult> results;
    results.push_back(database_suite(level));
    results.push_back(kickback_suite(level));
    results.push_back(schedule_sum_suite([](double th) { return schedule_weights(th); }));
    results.push_back(hamiltonian_suite(level));
    results.push_back(subspace_consistency_suite(level));
    results.push_back(closed_form_suite(level));
    results.push_back(overlap_suite(level));
    results.push_back(integrator_suite(level));
    results.push_back(estimator_recovery_suite(level));
    results.push_back(estimator_sampling_suite(level));
    results.push_back(scheduler_budget_suite(level));
    results.push_back(ledger_suite(level));
    results.push_back(mode_equivalence_suite(level));
    results.push_back(end_to_end_suite(level));
    return results;
}

}  // namespace aqc
