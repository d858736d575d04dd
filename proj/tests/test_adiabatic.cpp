#include <gtest/gtest.h>

#include <random>

#include "lzsm/adiabatic.hpp"
#include "lzsm/oracle.hpp"
#include "lzsm/zener.hpp"
#include "oracle_values.hpp"

using namespace lzsm;
using namespace lzsm::adiabatic;

namespace {

// closed-form antiderivative of sqrt(x^2 + 2 delta)
double zeta_exact(double t, double delta) {
    const double a2 = 2.0 * delta;
    return 0.5 * (t * std::sqrt(t * t + a2) + a2 * std::asinh(t / std::sqrt(a2)));
}

double max_entry_diff(const TransferMatrix& a, const TransferMatrix& b) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
    return d;
}

double wrap(double x) { return std::remainder(x, 2.0 * pi); }

}  // namespace

TEST(Zeta, DecoupledIsExact) {
    for (double t : {0.0, 0.3, 7.0, 200.0}) {
        EXPECT_EQ(zeta(t, 0.0), 0.5 * t * t);
        EXPECT_EQ(zeta(t, 0.0, ZetaMode::asymptotic), 0.5 * t * t);
    }
}

TEST(Zeta, QuadratureValues) {
    EXPECT_NEAR(zeta(20.0, 1.0), oracle_values::zeta_d1_t20, 1e-10 * oracle_values::zeta_d1_t20);
    EXPECT_NEAR(zeta(50.0, 0.1), oracle_values::zeta_d0p1_t50, 1e-10 * oracle_values::zeta_d0p1_t50);
    for (double d : {0.01, 0.3, 2.0}) {
        for (double t : {0.1, 1.0, 5.0, 80.0}) EXPECT_NEAR(zeta(t, d), zeta_exact(t, d), 1e-10 * zeta_exact(t, d));
    }
}

TEST(Zeta, Antisymmetric) {
    for (double d : {0.0, 0.1, 1.0}) {
        for (double t : {0.5, 6.0, 33.0}) {
            EXPECT_EQ(zeta(-t, d), -zeta(t, d));
            EXPECT_EQ(zeta(-t, d, ZetaMode::asymptotic), -zeta(t, d, ZetaMode::asymptotic));
        }
    }
    EXPECT_EQ(zeta(0.0, 0.4), 0.0);
}

TEST(Zeta, AsymptoticModeMatchesQuadrature) {
    for (double d = 0.01; d <= 2.0; d += 0.07) {
        for (double t : {20.0, 35.0, 100.0, 250.0}) {
            const double q = zeta(t, d);
            EXPECT_NEAR(zeta(t, d, ZetaMode::asymptotic), q, 1e-4 * (1.0 + std::abs(q))) << d << " " << t;
        }
    }
    // the first omitted term is about delta^2 / (8 tau_a^2), so the agreement is relative
    EXPECT_NEAR(zeta(20.0, 1.0, ZetaMode::asymptotic), oracle_values::zeta_d1_t20, 1e-4 * oracle_values::zeta_d1_t20);
    EXPECT_THROW(zeta(0.0, 0.1, ZetaMode::asymptotic), DomainError);
    EXPECT_THROW(zeta(1.0, -0.1), DomainError);
}

TEST(Zeta, CompositeRuleConverges) {
    // halving the panel width at least halves the error once the panels resolve
    // the branch points at +-i sqrt(2 delta), down to the rounding floor
    for (double d : {0.1, 1.0}) {
        const double exact = zeta_exact(50.0, d);
        double prev = std::abs(zeta_composite(50.0, d, 4) - exact);
        for (int n = 8; n <= 1024 && prev > 1e-8 * exact; n *= 2) {
            const double err = std::abs(zeta_composite(50.0, d, n) - exact);
            EXPECT_LE(err, 0.5 * prev) << "panels = " << n;
            prev = err;
        }
        EXPECT_LE(prev, 1e-8 * exact);
    }
    EXPECT_THROW(zeta_composite(1.0, 0.1, 0), DomainError);
}

TEST(UAd, Examples) {
    EXPECT_EQ(u_ad(Side::before, 0.0).unitarity_defect(), 0.0);
    EXPECT_LE(max_entry_diff(u_ad(Side::after, 0.0), TransferMatrix::identity()), 0.0);
    const auto h = u_ad(Side::before, 0.5 * pi);
    EXPECT_LE(max_entry_diff(h, TransferMatrix::diag(cplx{0.0, -1.0}, cplx{0.0, 1.0})), 1e-16);
    for (double z : {0.3, -2.0, 1234.5}) {
        EXPECT_LE(max_entry_diff(u_ad(Side::after, z), u_ad(Side::before, z).adjoint()), 0.0);
        EXPECT_LE(u_ad(Side::before, z).unitarity_defect(), 1e-15);
    }
}

TEST(StokesPhase, Values) {
    EXPECT_EQ(stokes_phase(0.0), 0.25 * pi);
    EXPECT_NEAR(stokes_phase(1e-12), 0.25 * pi, 1e-10);
    EXPECT_NEAR(stokes_phase(0.5), oracle_values::stokes_phase_0p5, 1e-14);
    EXPECT_NEAR(stokes_phase(50.0), oracle_values::stokes_phase_50, 1e-12);
    EXPECT_LT(std::abs(stokes_phase(50.0)), std::abs(stokes_phase(5.0)));
    EXPECT_THROW(stokes_phase(-0.1), DomainError);
}

TEST(TransferMatrix, LimitsAndUnitarity) {
    EXPECT_LE(max_entry_diff(transfer_matrix(0.0), TransferMatrix::identity()), 1e-16);
    const auto big = transfer_matrix(20.0);
    EXPECT_LT(std::abs(big(0, 0)), 1e-27);
    EXPECT_NEAR(std::abs(big(0, 1)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(big(1, 0)), 1.0, 1e-15);
    const auto n = transfer_matrix(0.3);
    EXPECT_NEAR(std::norm(n(0, 0)) + std::norm(n(0, 1)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(std::conj(n(0, 0)) * n(0, 1) + std::conj(n(1, 0)) * n(1, 1)), 0.0, 1e-16);
    for (double d = 0.0; d <= 5.0; d += 0.01) EXPECT_LE(transfer_matrix(d).unitarity_defect(), 1e-12);
}

TEST(ComposePassage, TripleProductIdentity) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double d = 3.0 * u(rng);
        const double ta = 5.0 + 300.0 * u(rng);
        const double z = zeta(ta, d);
        const auto triple = u_ad(Side::after, z) * transfer_matrix(d) * u_ad(Side::before, z);
        const auto closed = compose_passage(ta, d);
        EXPECT_LE(max_entry_diff(triple, closed), 1e-15);
        EXPECT_LE(closed.unitarity_defect(), 1e-12);
    }
    EXPECT_THROW(compose_passage(4.0, 0.1), DomainError);
}

TEST(ComposePassage, OffDiagonalPhase) {
    // Arg of the off-diagonal entry is 2 zeta + Arg sqrt(T) = 2 zeta + phi_S
    for (double d : {0.05, 0.1, 0.3, 1.0, 3.0}) {
        for (double ta : {5.0, 50.0, 200.0}) {
            const auto m = compose_passage(ta, d);
            EXPECT_NEAR(wrap(std::arg(m(0, 1)) - 2.0 * zeta(ta, d) - stokes_phase(d)), 0.0, 1e-6);
        }
    }
}

TEST(ComposePassage, Occupations) {
    const auto m = compose_passage(100.0, 0.1);
    EXPECT_NEAR(std::norm(m(0, 0)), lzsm_probability(0.1), 1e-15);
    EXPECT_NEAR(std::norm(m(1, 0)), lzsm_complement(0.1), 1e-15);
}

TEST(ComposePassage, AgainstOdePropagator) {
    // the occupation gap at tau_a = 200 is the finite-time oscillation of the exact solution
    const double d = 0.1;
    const double ta = 200.0;
    const auto u = oracle::propagator(-ta, ta, d);
    const auto m = compose_passage(ta, d);
    const Spinor ex = zener::eval_zener(zener::coefficients_from_initial({cplx{0.0}, cplx{1.0}}, -ta, d), ta);
    EXPECT_NEAR(std::norm(u(0, 1)) - std::norm(m(0, 1)), ex.p_alpha() - lzsm_complement(d), 1e-6);
    EXPECT_NEAR(std::norm(u(1, 1)) - std::norm(m(1, 1)), ex.p_beta() - lzsm_probability(d), 1e-6);
    EXPECT_LE(std::abs(std::norm(u(0, 1)) - std::norm(m(0, 1))), 3e-3);
}

TEST(AdiabaticBasis, EigenvectorsOfHamiltonian) {
    for (double d : {0.0, 0.1, 1.0}) {
        for (double tau : {-8.0, -0.2, 0.0, 0.7, 30.0}) {
            if (d == 0.0 && tau == 0.0) continue;
            const auto b = adiabatic_basis(tau, d);
            EXPECT_LE(b.unitarity_defect(), 1e-15);
            const auto h = dimensionless_hamiltonian(tau, d);
            for (int col = 0; col < 2; ++col) {
                const Spinor v{b(0, col), b(1, col)};
                const Spinor hv = h * v;
                // H v parallel to v
                EXPECT_NEAR(std::abs(hv.alpha * v.beta - hv.beta * v.alpha), 0.0, 1e-13);
            }
        }
    }
}

TEST(Evolve, PiecewiseModel) {
    const double d = 0.3;
    const Spinor in{cplx{0.6}, cplx{0.0, 0.8}};
    for (double tau : {-40.0, -3.0, -0.1}) {
        const Spinor s = evolve(tau, d, in);
        EXPECT_NEAR(s.p_alpha(), 0.36, 1e-14);
        EXPECT_NEAR(s.p_beta(), 0.64, 1e-14);
    }
    const Spinor a = evolve(1.0, d, in);
    const Spinor b = evolve(50.0, d, in);
    EXPECT_NEAR(a.p_alpha(), b.p_alpha(), 1e-14);
    EXPECT_NEAR(a.norm2(), 1.0, 1e-14);
    const Spinor down = evolve(10.0, d, {cplx{0.0}, cplx{1.0}});
    EXPECT_NEAR(down.p_alpha(), lzsm_complement(d), 1e-14);
    EXPECT_THROW(evolve(1.0, d, {cplx{1.0}, cplx{1.0}}), DomainError);
}

TEST(Evolve, FarFieldPhaseMatchesExact) {
    // far from the crossing the model amplitudes follow the exact ones up to O(1/tau)
    for (double d : {0.1, 1.0}) {
        const Spinor in{cplx{0.6}, cplx{0.8}};
        const auto c = zener::asymptotic_coefficients(in, d);
        for (double tau : {-100.0, 100.0}) {
            const Spinor m = evolve(tau, d, in);
            const Spinor e = zener::eval_zener(c, tau);
            EXPECT_LE(std::abs(m.alpha - e.alpha), 0.02) << d << " " << tau;
            EXPECT_LE(std::abs(m.beta - e.beta), 0.02) << d << " " << tau;
        }
    }
}
