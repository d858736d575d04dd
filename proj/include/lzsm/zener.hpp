#pragma once

// Exact solution of the linear sweep in parabolic cylinder functions:
//   alpha = A+ D_{-1-i delta}(z) + A- D_{-1-i delta}(-z)
//   beta  = B+ D_{-i delta}(z)   + B- D_{-i delta}(-z),   B(+-) = -+ delta^{-1/2} e^{-i pi/4} A(+-)
// with z = (1 + i) tau.

#include <cmath>
#include <complex>
#include <limits>

#include "lzsm/model.hpp"
#include "lzsm/special.hpp"

namespace lzsm::zener {

/// z = sqrt(2) e^{i pi/4} tau = (1 + i) tau. For tau < 0 this has Arg -3pi/4.
inline cplx z_of_tau(double tau) { return {tau, tau}; }

struct ZenerCoefficients {
    cplx a_plus{0.0};
    cplx a_minus{0.0};
    double delta = 0.0;
    cplx z_init{0.0};
    // delta == 0 only: alpha = f0 e^{i tau^2/2}, beta = g0 e^{-i tau^2/2}
    cplx f0{0.0};
    cplx g0{0.0};

    bool decoupled() const { return delta == 0.0; }

    cplx b_plus() const { return -a_plus * beta_factor(); }
    cplx b_minus() const { return a_minus * beta_factor(); }

    /// delta^{-1/2} e^{-i pi/4}
    cplx beta_factor() const {
        if (decoupled()) throw DomainError("ZenerCoefficients: B coefficients undefined at delta = 0");
        return std::polar(1.0 / std::sqrt(delta), -0.25 * pi);
    }
};

namespace detail {

inline cplx nu_alpha(double delta) { return {-1.0, -delta}; }
inline cplx nu_beta(double delta) { return {0.0, -delta}; }

inline Spinor decoupled_state(const ZenerCoefficients& c, double tau) {
    const double ph = 0.5 * tau * tau;
    return {c.f0 * std::polar(1.0, ph), c.g0 * std::polar(1.0, -ph)};
}

// Solves the 2x2 system at tau_i using the Wronskian
//   D_nu(z) D_{nu+1}(-z) + D_nu(-z) D_{nu+1}(z) = sqrt(2 pi) / Gamma(-nu),  nu = -1 - i delta,
// so no numerical determinant is formed.
inline ZenerCoefficients solve_at(const Spinor& init, double tau_i, double delta) {
    ZenerCoefficients c;
    c.delta = delta;
    c.z_init = z_of_tau(tau_i);
    if (delta == 0.0) {
        const double ph = 0.5 * tau_i * tau_i;
        c.f0 = init.alpha * std::polar(1.0, -ph);
        c.g0 = init.beta * std::polar(1.0, ph);
        return c;
    }
    const cplx z = c.z_init;
    const cplx da_p = special::pcf_d(nu_alpha(delta), z);
    const cplx da_m = special::pcf_d(nu_alpha(delta), -z);
    const cplx db_p = special::pcf_d(nu_beta(delta), z);
    const cplx db_m = special::pcf_d(nu_beta(delta), -z);
    const cplx k = c.beta_factor();
    const cplx det = k * std::sqrt(2.0 * pi) * special::rgamma(cplx{1.0, delta});
    c.a_plus = (k * db_m * init.alpha - da_m * init.beta) / det;
    c.a_minus = (k * db_p * init.alpha + da_p * init.beta) / det;
    return c;
}

}  // namespace detail

/// Coefficients of the exact solution passing through `init` at tau_i.
inline ZenerCoefficients coefficients_from_initial(const Spinor& init, double tau_i, double delta) {
    if (!(delta >= 0.0)) throw DomainError("coefficients_from_initial: delta must be >= 0");
    if (!std::isfinite(tau_i)) throw DomainError("coefficients_from_initial: tau_i must be finite");
    if (!init.is_normalized(asymptotic_norm_tol)) {
        throw DomainError("coefficients_from_initial: initial spinor is not normalized");
    }
    return detail::solve_at(init, tau_i, delta);
}

/// Exact solution that starts in the lower diabatic state at tau -> -infinity,
/// with the phase convention of the asymptotic (Majorana) solution:
/// A+ = 0, A- = i sqrt(delta) e^{-pi delta/4} 2^{-i delta/2}.
inline ZenerCoefficients ground_coefficients(double delta) {
    if (!(delta >= 0.0)) throw DomainError("ground_coefficients: delta must be >= 0");
    ZenerCoefficients c;
    c.delta = delta;
    c.z_init = cplx{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    if (delta == 0.0) {
        c.g0 = std::polar(1.0, 0.25 * pi);
        return c;
    }
    c.a_minus = cplx{0.0, std::sqrt(delta)} * std::exp(cplx{-0.25 * pi * delta, -0.5 * delta * std::log(2.0)});
    return c;
}

inline Spinor eval_zener(const ZenerCoefficients& c, double tau);

/// Exact solution with asymptotic in-state (alpha_i, beta_i): the exact
/// counterpart of beta_i psi1 + alpha_i psi2, where psi2 = (conj beta1, -conj alpha1).
inline ZenerCoefficients asymptotic_coefficients(const Spinor& in_state, double delta) {
    const ZenerCoefficients g = ground_coefficients(delta);
    // psi2 is evaluated at tau = 0, where the power series is exact.
    const Spinor psi1 = eval_zener(g, 0.0);
    const ZenerCoefficients m = detail::solve_at({std::conj(psi1.beta), -std::conj(psi1.alpha)}, 0.0, delta);
    ZenerCoefficients c;
    c.delta = delta;
    c.z_init = g.z_init;
    c.a_plus = in_state.beta * g.a_plus + in_state.alpha * m.a_plus;
    c.a_minus = in_state.beta * g.a_minus + in_state.alpha * m.a_minus;
    c.f0 = in_state.beta * g.f0 + in_state.alpha * m.f0;
    c.g0 = in_state.beta * g.g0 + in_state.alpha * m.g0;
    return c;
}

inline Spinor eval_zener(const ZenerCoefficients& c, double tau) {
    if (!std::isfinite(tau)) throw DomainError("eval_zener: tau must be finite");
    if (c.decoupled()) return detail::decoupled_state(c, tau);
    const cplx z = z_of_tau(tau);
    const cplx na = detail::nu_alpha(c.delta);
    const cplx nb = detail::nu_beta(c.delta);
    Spinor s;
    if (c.a_plus != cplx{0.0}) {
        s.alpha += c.a_plus * special::pcf_d(na, z);
        s.beta += c.b_plus() * special::pcf_d(nb, z);
    }
    if (c.a_minus != cplx{0.0}) {
        s.alpha += c.a_minus * special::pcf_d(na, -z);
        s.beta += c.b_minus() * special::pcf_d(nb, -z);
    }
    return s;
}

/// The exact solution with every D replaced by the leading term of its
/// large-|z| expansion (one-term form at Arg pi/4, two-term form at Arg -3pi/4).
inline Spinor eval_zener_asymptotic(const ZenerCoefficients& c, double tau) {
    if (!(std::abs(tau) >= 5.0)) throw DomainError("eval_zener_asymptotic: need |tau| >= 5");
    if (c.decoupled()) return detail::decoupled_state(c, tau);
    const cplx z = z_of_tau(tau);
    const cplx na = detail::nu_alpha(c.delta);
    const cplx nb = detail::nu_beta(c.delta);
    auto d = [](cplx nu, cplx arg) {
        const auto regime = std::arg(arg) > 0.0 ? special::PcfRegime::asym_single : special::PcfRegime::asym_full;
        return special::pcf_asymptotic(nu, arg, regime, special::AsymptoticOrder::leading, 0.0);
    };
    Spinor s;
    if (c.a_plus != cplx{0.0}) {
        s.alpha += c.a_plus * d(na, z);
        s.beta += c.b_plus() * d(nb, z);
    }
    if (c.a_minus != cplx{0.0}) {
        s.alpha += c.a_minus * d(na, -z);
        s.beta += c.b_minus() * d(nb, -z);
    }
    return s;
}

/// Transition probability P(tau) = |alpha(tau)|^2 for the ground-state start,
/// delta e^{-pi delta/2} |D_{-1-i delta}(-z)|^2.
inline double p_of_tau(double tau, double delta) {
    if (!(delta >= 0.0)) throw DomainError("p_of_tau: delta must be >= 0");
    if (delta == 0.0) return 0.0;
    const cplx d = special::pcf_d(detail::nu_alpha(delta), -z_of_tau(tau));
    return delta * std::exp(-0.5 * pi * delta) * std::norm(d);
}

}  // namespace lzsm::zener
