// Single passage at delta = 0.3: exact, asymptotic and adiabatic-impulse
// occupations of the upper diabatic level, plus the scalar summaries.

#include <cstdio>

#include "lzsm/lzsm.hpp"

int main() {
    using namespace lzsm;
    const double delta = 0.3;
    const Spinor ground{cplx{0.0}, cplx{1.0}};

    const auto exact = zener::asymptotic_coefficients(ground, delta);
    std::printf("P = %.6f   phi_S = %.6f   tau_jump = %.6f\n", lzsm_probability(delta),
                adiabatic::stokes_phase(delta), analysis::jump_time(delta));
    std::printf("%8s %12s %12s %12s\n", "tau", "exact", "majorana", "impulse");
    for (double tau : {-6.0, -3.0, -1.5, -0.5, 0.5, 1.5, 3.0, 6.0}) {
        std::printf("%8.2f %12.6f %12.6f %12.6f\n", tau, zener::eval_zener(exact, tau).p_alpha(),
                    analysis::occupations(majorana::general_solution(tau, delta, ground)).first,
                    adiabatic::evolve(tau, delta, ground).p_alpha());
    }

    const TransferMatrix u = oracle::propagator(-50.0, 50.0, delta);
    const TransferMatrix model = adiabatic::compose_passage(50.0, delta);
    std::printf("|U01| ode = %.6f   model = %.6f\n", std::abs(u(0, 1)), std::abs(model(0, 1)));
    return 0;
}
