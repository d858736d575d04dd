#pragma once

// Asymptotic wave function obtained from the Laplace image
//   F(s) = C_delta exp(-i s^2 / 4) s^{-1-i delta}
// by steepest descent (saddle at s = -2 i tau) plus, for tau > 0, the Hankel
// loop around s = 0.

#include <cmath>
#include <complex>

#include "lzsm/model.hpp"
#include "lzsm/special.hpp"

namespace lzsm::majorana {

inline constexpr double default_tau_min = 1e-3;
inline constexpr double far_field_min_tau = 5.0;

/// Sign in front of conj(alpha1) in the second partial solution
/// psi2 = (conj beta1, -+ conj alpha1).
enum class Branch { plus, minus };

/// C_delta = sqrt(delta / 2pi) e^{-pi delta/2} e^{i theta}.
inline cplx c_delta(double delta, double theta = 0.0) {
    if (!(delta >= 0.0)) throw DomainError("c_delta: delta must be >= 0");
    return std::polar(std::sqrt(delta / (2.0 * pi)) * std::exp(-0.5 * pi * delta), theta);
}

struct MajoranaSolution {
    double delta = 0.0;
    cplx c_delta{0.0};
    Branch branch_psi2 = Branch::minus;
    double theta = 0.0;  // global phase carried by c_delta
    double tau_min = default_tau_min;

    static MajoranaSolution make(double delta, double theta = 0.0, Branch branch = Branch::minus) {
        return {delta, lzsm::majorana::c_delta(delta, theta), branch, theta, default_tau_min};
    }
};

namespace detail {

inline void check_tau(double tau, double tau_min, const char* who) {
    if (!std::isfinite(tau) || !(std::abs(tau) >= tau_min)) {
        throw DomainError(std::string(who) + ": |tau| below the asymptotic guard");
    }
}

}  // namespace detail

/// First partial solution; |alpha| -> 0, |beta| -> 1 as tau -> -infinity.
/// C_delta is folded into the prefactors so that delta = 0 stays finite.
inline Spinor eval_psi1(const MajoranaSolution& m, double tau) {
    detail::check_tau(tau, m.tau_min, "eval_psi1");
    const double d = m.delta;
    const cplx phase = std::polar(std::exp(-0.5 * pi * d), m.theta);  // C_delta sqrt(2pi/delta)
    const cplx log_s0 = std::log(cplx{0.0, -2.0 * tau});               // principal log of -2 i tau
    const double q = 0.5 * tau * tau;

    Spinor s;
    s.alpha = std::sqrt(2.0 * d) * phase * std::exp(cplx{-1.0, -d} * log_s0 + cplx{0.0, 0.75 * pi - q});
    s.beta = phase * std::exp(cplx{0.0, -d} * log_s0 + cplx{0.0, 0.25 * pi - q});
    if (tau > 0.0 && d > 0.0) {
        const cplx loop = m.c_delta * cplx{0.0, 2.0 * pi} * special::rgamma(cplx{1.0, d}) *
                          std::exp(cplx{0.0, d} * std::log(tau) + cplx{0.0, q});
        s.alpha += loop;
        s.beta += std::sqrt(0.5 * d) * loop / tau;
    }
    return s;
}

inline Spinor eval_psi1(double tau, double delta) { return eval_psi1(MajoranaSolution::make(delta), tau); }

/// Far-field forms with the transient 1/tau terms dropped.
/// tau < 0: (0, (2|tau|)^{-i delta} e^{i(pi/4 - tau^2/2)}).
/// tau > 0: alpha = sqrt(1-P) e^{i(Arg Gamma(1 - i delta) + pi/2 + tau^2/2 + delta ln tau)},
///          beta  = sqrt(P) e^{i(pi/4 - tau^2/2 - delta ln 2tau)}.
inline Spinor eval_psi1_far(double tau, double delta) {
    if (!(delta >= 0.0)) throw DomainError("eval_psi1_far: delta must be >= 0");
    if (!std::isfinite(tau) || !(std::abs(tau) >= far_field_min_tau)) {
        throw DomainError("eval_psi1_far: need |tau| >= 5");
    }
    const double q = 0.5 * tau * tau;
    if (tau < 0.0) {
        return {cplx{0.0}, std::polar(1.0, 0.25 * pi - q - delta * std::log(-2.0 * tau))};
    }
    const double p = lzsm_probability(delta);
    const double ag = special::arg_gamma_one_minus_i_delta(delta);
    return {std::polar(std::sqrt(lzsm_complement(delta)), ag + 0.5 * pi + q + delta * std::log(tau)),
            std::polar(std::sqrt(p), 0.25 * pi - q - delta * std::log(2.0 * tau))};
}

/// Second partial solution by swap and conjugation of psi1.
inline Spinor eval_psi2(const MajoranaSolution& m, double tau) {
    const Spinor p1 = eval_psi1(m, tau);
    const double sign = m.branch_psi2 == Branch::minus ? -1.0 : 1.0;
    return {std::conj(p1.beta), sign * std::conj(p1.alpha)};
}

inline Spinor eval_psi2(double tau, double delta, Branch branch = Branch::minus) {
    return eval_psi2(MajoranaSolution::make(delta, 0.0, branch), tau);
}

/// beta_i psi1 + alpha_i psi2 for an in-state (alpha_i, beta_i) prepared at tau -> -infinity.
inline Spinor general_solution(const MajoranaSolution& m, double tau, const Spinor& init) {
    if (!init.is_normalized(asymptotic_norm_tol)) {
        throw DomainError("general_solution: initial spinor is not normalized");
    }
    return init.beta * eval_psi1(m, tau) + init.alpha * eval_psi2(m, tau);
}

inline Spinor general_solution(double tau, double delta, const Spinor& init) {
    return general_solution(MajoranaSolution::make(delta), tau, init);
}

}  // namespace lzsm::majorana
