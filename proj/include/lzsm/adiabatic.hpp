#pragma once

// Adiabatic-impulse model: adiabatic phase accumulation away from the
// crossing and an instantaneous transfer matrix N at tau = 0.

#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lzsm/model.hpp"
#include "lzsm/quadrature.hpp"
#include "lzsm/special.hpp"

namespace lzsm::adiabatic {

enum class ZetaMode { quadrature, asymptotic };

struct AdiabaticPhase {
    double zeta = 0.0;
    double tau_a = 0.0;
    double delta = 0.0;
    ZetaMode mode = ZetaMode::quadrature;
};

inline constexpr double zeta_rel_tol = 1e-10;

namespace detail {

// Half the adiabatic splitting in tau units: sqrt(tau^2 + 2 delta).
inline double half_gap(double tau, double delta) { return std::sqrt(tau * tau + 2.0 * delta); }

inline void check_args(double tau_a, double delta, const char* who) {
    if (!std::isfinite(tau_a)) throw DomainError(std::string(who) + ": tau_a must be finite");
    if (!(delta >= 0.0)) throw DomainError(std::string(who) + ": delta must be >= 0");
}

}  // namespace detail

/// zeta(tau_a) = integral_0^tau_a sqrt(tau^2 + 2 delta) dtau, odd in tau_a.
/// The asymptotic mode is tau_a^2/2 + delta/2 - (delta/2) ln delta + delta ln(sqrt2 tau_a).
inline AdiabaticPhase adiabatic_phase(double tau_a, double delta, ZetaMode mode = ZetaMode::quadrature) {
    detail::check_args(tau_a, delta, "zeta");
    AdiabaticPhase r{0.0, tau_a, delta, mode};
    const double t = std::abs(tau_a);
    const double sgn = tau_a < 0.0 ? -1.0 : 1.0;
    if (delta == 0.0) {
        r.zeta = sgn * 0.5 * t * t;
        return r;
    }
    if (mode == ZetaMode::asymptotic) {
        if (t == 0.0) throw DomainError("zeta: asymptotic form needs tau_a != 0");
        r.zeta = sgn * (0.5 * t * t + 0.5 * delta - 0.5 * delta * std::log(delta) +
                        delta * std::log(std::sqrt(2.0) * t));
        return r;
    }
    if (t == 0.0) return r;
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(
        [delta](double x) { return detail::half_gap(x, delta); }, 0.0, t, 20, zeta_rel_tol, &err);
    r.zeta = sgn * v;
    return r;
}

inline double zeta(double tau_a, double delta, ZetaMode mode = ZetaMode::quadrature) {
    return adiabatic_phase(tau_a, delta, mode).zeta;
}

/// zeta by a composite 4-point Gauss-Legendre rule on `panels` equal panels.
inline double zeta_composite(double tau_a, double delta, int panels) {
    detail::check_args(tau_a, delta, "zeta_composite");
    if (panels < 1) throw DomainError("zeta_composite: need at least one panel");
    static const auto rule = quadrature::gauss_legendre(4);
    const double h = tau_a / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        sum += quadrature::integrate(rule, [delta](double x) { return detail::half_gap(x, delta); }, i * h,
                                     (i + 1) * h);
    }
    return sum;
}

enum class Side { before, after };

/// Adiabatic propagator in the diabatic basis far from the crossing:
/// diag(e^{-i zeta}, e^{i zeta}) before, diag(e^{i zeta}, e^{-i zeta}) after.
inline TransferMatrix u_ad(Side side, double zeta_value) {
    const double s = side == Side::before ? -1.0 : 1.0;
    return TransferMatrix::diag(std::polar(1.0, s * zeta_value), std::polar(1.0, -s * zeta_value));
}

/// phi_S = pi/4 + Arg Gamma(1 - i delta) + delta (ln delta - 1); pi/4 at delta = 0.
inline double stokes_phase(double delta) {
    if (!(delta >= 0.0)) throw DomainError("stokes_phase: delta must be >= 0");
    if (delta == 0.0) return 0.25 * pi;
    return 0.25 * pi + special::arg_gamma_one_minus_i_delta(delta) + delta * (std::log(delta) - 1.0);
}

/// sqrt(T) = sqrt(1 - P) e^{i phi_S}, the square root of T = (1 - P) e^{2 i phi_S}.
inline cplx sqrt_transmission(double delta) {
    return std::polar(std::sqrt(lzsm_complement(delta)), stokes_phase(delta));
}

/// N = [[sqrt R, sqrt T], [-conj(sqrt T), sqrt R]] with R = P.
inline TransferMatrix transfer_matrix(double delta) {
    const double r = std::sqrt(lzsm_probability(delta));
    const cplx t = sqrt_transmission(delta);
    return {{cplx{r}, t, -std::conj(t), cplx{r}}};
}

/// u_ad(after, zeta(tau_a)) N u_ad(before, zeta(tau_a)) in closed form.
inline TransferMatrix compose_passage(double tau_a, double delta) {
    if (!(tau_a >= 5.0)) throw DomainError("compose_passage: need tau_a >= 5");
    const double z = zeta(tau_a, delta);
    const double r = std::sqrt(lzsm_probability(delta));
    const cplx t = sqrt_transmission(delta);
    const cplx ph = std::polar(1.0, 2.0 * z);
    return {{cplx{r}, t * ph, -std::conj(t) * std::conj(ph), cplx{r}}};
}

/// Columns are the instantaneous eigenstates phi+ and phi- in the diabatic
/// basis, phi(+-) = gamma(-+) |up> -+ gamma(+-) |down>, gamma(+-) = sqrt((1 +- eps/dE)/2).
inline TransferMatrix adiabatic_basis(double tau, double delta) {
    detail::check_args(tau, delta, "adiabatic_basis");
    const double g = detail::half_gap(tau, delta);
    const double ratio = g == 0.0 ? 0.0 : tau / g;
    const double gp = std::sqrt(0.5 * (1.0 + ratio));
    const double gm = std::sqrt(0.5 * (1.0 - ratio));
    return {{cplx{gm}, cplx{gp}, cplx{-gp}, cplx{gm}}};
}

/// Phase that maps an in-state (alpha_i, beta_i) onto the amplitudes just
/// before the impulse: pi/4 - (delta/2)(ln 2 delta - 1).
inline double in_state_phase(double delta) {
    if (delta == 0.0) return 0.25 * pi;
    return 0.25 * pi - 0.5 * delta * (std::log(2.0 * delta) - 1.0);
}

/// Model state at tau for the in-state `init` prepared at tau -> -infinity:
/// pure adiabatic phases for tau < 0, then N and adiabatic phases after.
inline Spinor evolve(double tau, double delta, const Spinor& init) {
    detail::check_args(tau, delta, "adiabatic::evolve");
    if (!init.is_normalized(asymptotic_norm_tol)) {
        throw DomainError("adiabatic::evolve: initial spinor is not normalized");
    }
    const double th = in_state_phase(delta);
    const Spinor c_in{init.alpha * std::polar(1.0, -th), init.beta * std::polar(1.0, th)};
    const double z = zeta(std::abs(tau), delta);
    if (tau < 0.0) return u_ad(Side::before, -z) * c_in;
    return u_ad(Side::after, z) * (transfer_matrix(delta) * c_in);
}

}  // namespace lzsm::adiabatic
