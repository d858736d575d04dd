#pragma once

// Complex log-Gamma and the parabolic cylinder function D_nu(z) for complex
// order and argument.
//
// log_gamma is the principal branch (analytic off the negative real axis,
// real on the positive axis), so its imaginary part is the continuous
// Arg Gamma used by every phase formula in this library.
//
// D_nu(z) uses the confluent-hypergeometric power series for |z| <= R
// (summed in long double) and the large-|z| expansions
//   D_p(z) ~ e^{-z^2/4} z^p S1                                   |Arg z| < 3pi/4
//   D_p(z) ~ e^{-z^2/4} z^p S1 - sqrt(2pi)/Gamma(-p) e^{-i p pi}
//            e^{z^2/4} z^{-p-1} S2                               -5pi/4 < Arg z < -pi/4
// outside, with S1, S2 truncated at their smallest term.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "lzsm/errors.hpp"
#include "lzsm/model.hpp"

namespace lzsm::special {

namespace detail {

// B_{2k} / (2k (2k - 1)), k = 1..12
template <class T>
inline constexpr T stirling_coeffs[12] = {
    T(1) / T(12),
    T(-1) / T(360),
    T(1) / T(1260),
    T(-1) / T(1680),
    T(1) / T(1188),
    T(-691) / T(360360),
    T(1) / T(156),
    T(-3617) / T(122400),
    T(43867) / T(244188),
    T(-174611) / T(125400),
    T(77683) / T(5796),
    T(-236364091) / T(1506960),
};

template <class T>
bool is_gamma_pole(std::complex<T> z) {
    return z.imag() == T(0) && z.real() <= T(0) && z.real() == std::floor(z.real());
}

}  // namespace detail

/// Principal log Gamma(z). Throws PoleError at non-positive integers.
template <class T>
std::complex<T> log_gamma(std::complex<T> z) {
    using C = std::complex<T>;
    if (detail::is_gamma_pole(z)) {
        throw PoleError("log_gamma: pole at z = " + std::to_string(static_cast<double>(z.real())));
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("log_gamma: non-finite argument");
    }
    // Shift right until the Stirling series is accurate; the subtracted
    // principal logs keep the result on the principal branch.
    C shift{0};
    C w = z;
    while (w.real() < T(20)) {
        shift += std::log(w);
        w += T(1);
    }
    const C inv = T(1) / w;
    const C inv2 = inv * inv;
    C series{0};
    C p = inv;
    for (const T c : detail::stirling_coeffs<T>) {
        series += c * p;
        p *= inv2;
    }
    const T half_log_2pi = T(0.5) * std::log(T(2) * std::numbers::pi_v<T>);
    return (w - T(0.5)) * std::log(w) - w + half_log_2pi + series - shift;
}

inline cplx log_gamma(cplx z) { return log_gamma<double>(z); }
inline cplx log_gamma(double x) { return log_gamma<double>(cplx{x, 0.0}); }

/// Gamma(z).
inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

/// 1 / Gamma(z); entire, zero at the poles of Gamma.
template <class T>
std::complex<T> rgamma(std::complex<T> z) {
    if (detail::is_gamma_pole(z)) return {T(0), T(0)};
    return std::exp(-log_gamma<T>(z));
}

inline cplx rgamma(cplx z) { return rgamma<double>(z); }

/// Continuous Arg Gamma(z) (imaginary part of the principal log Gamma).
inline double arg_gamma(cplx z) { return log_gamma(z).imag(); }

/// Arg Gamma(1 - i delta); zero at delta = 0, odd in delta.
inline double arg_gamma_one_minus_i_delta(double delta) {
    if (!(delta >= 0.0)) throw DomainError("arg_gamma_one_minus_i_delta: delta must be >= 0");
    return arg_gamma(cplx{1.0, -delta});
}

// ---------------------------------------------------------------------------
// Parabolic cylinder function

enum class PcfRegime {
    series,            // |z| <= crossover radius
    asym_full,         // two-term form, -5pi/4 < Arg z < -pi/4
    asym_full_mirror,  // complex-conjugate sector, pi/4 < Arg z < 5pi/4
    asym_single,       // one-term form, |Arg z| < 3pi/4
};

inline std::string regime_name(PcfRegime r) {
    switch (r) {
        case PcfRegime::series: return "series";
        case PcfRegime::asym_full: return "asym_full";
        case PcfRegime::asym_full_mirror: return "asym_full_mirror";
        case PcfRegime::asym_single: return "asym_single";
    }
    return "unknown";
}

inline constexpr double default_crossover_radius = 6.0;

/// Which representation pcf_d uses at z. Inside the overlap of the
/// one-term and two-term sectors the switch is made at |Arg z| = pi/2,
/// where the dropped term is most recessive.
inline PcfRegime select_regime(cplx z, double crossover_radius = default_crossover_radius) {
    if (std::abs(z) <= crossover_radius) return PcfRegime::series;
    const double a = std::arg(z);
    if (std::abs(a) <= 0.5 * pi) return PcfRegime::asym_single;
    return a < 0.0 ? PcfRegime::asym_full : PcfRegime::asym_full_mirror;
}

enum class AsymptoticOrder {
    leading,  // first term of each series only
    optimal,  // truncate each series at its smallest term
};

struct AsymptoticResult {
    cplx value;
    double error_estimate;  // magnitude of the first omitted term(s)
};

namespace detail {

using ld = long double;
using cld = std::complex<long double>;

// 1F1(a; b; x) by direct summation.
inline cld kummer_m(cld a, cld b, cld x) {
    constexpr ld eps = std::numeric_limits<ld>::epsilon();
    constexpr int max_terms = 2000;
    cld sum{1};
    cld term{1};
    const ld ax = std::abs(x);
    for (int k = 0; k < max_terms; ++k) {
        const ld kk = static_cast<ld>(k);
        term *= (a + kk) / (b + kk) * x / (kk + 1);
        sum += term;
        if (term == cld{0}) return sum;
        if (kk + 1 > ax && std::abs(term) <= eps * std::abs(sum)) return sum;
    }
    throw ConvergenceError("kummer_m: series did not converge");
}

inline cplx pcf_series(cplx nu_d, cplx z_d) {
    const cld nu{nu_d.real(), nu_d.imag()};
    const cld z{z_d.real(), z_d.imag()};
    const ld sqrt_pi = std::sqrt(std::numbers::pi_v<ld>);
    const ld sqrt_2pi = std::sqrt(2 * std::numbers::pi_v<ld>);
    const cld x = z * z / ld(2);
    const cld pref = std::exp(nu * std::log(ld(2)) / ld(2) - z * z / ld(4));
    const cld even = sqrt_pi * rgamma<ld>((ld(1) - nu) / ld(2)) * kummer_m(-nu / ld(2), ld(0.5), x);
    const cld odd = sqrt_2pi * z * rgamma<ld>(-nu / ld(2)) *
                    kummer_m((ld(1) - nu) / ld(2), ld(1.5), x);
    const cld r = pref * (even - odd);
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

// Sum of a Poincare series with term ratio given by `ratio(s)` (t_{s+1} = t_s ratio(s)).
template <class Ratio>
std::pair<cplx, double> asymptotic_sum(Ratio ratio, AsymptoticOrder order) {
    if (order == AsymptoticOrder::leading) return {cplx{1.0}, std::abs(ratio(0))};
    constexpr double eps = std::numeric_limits<double>::epsilon();
    cplx sum{1.0};
    cplx term{1.0};
    for (int s = 0; s < 10000; ++s) {
        const cplx next = term * ratio(s);
        if (next == cplx{0.0}) return {sum, 0.0};
        if (std::abs(next) >= std::abs(term)) return {sum, std::abs(term)};
        sum += next;
        term = next;
        if (std::abs(term) <= eps * std::abs(sum)) return {sum, std::abs(term)};
    }
    return {sum, std::abs(term)};
}

inline void check_exponent(cplx log_mag, const char* who) {
    if (log_mag.real() > 709.0) throw OverflowError(std::string(who) + ": result overflows double");
}

}  // namespace detail

/// Large-|z| expansion of D_nu(z) in the named sector. The argument must lie
/// inside that sector's domain and satisfy |z| >= min_radius; violations throw
/// DomainError rather than falling back to another form.
inline AsymptoticResult pcf_asymptotic_detailed(cplx nu, cplx z, PcfRegime which,
                                                AsymptoticOrder order = AsymptoticOrder::optimal,
                                                double min_radius = default_crossover_radius) {
    const double r = std::abs(z);
    const double a = std::arg(z);
    if (r < min_radius) throw DomainError("pcf_asymptotic: |z| below the asymptotic radius");

    double theta = a;
    switch (which) {
        case PcfRegime::series:
            throw DomainError("pcf_asymptotic: 'series' is not an asymptotic regime");
        case PcfRegime::asym_single:
            if (!(std::abs(a) < 0.75 * pi)) throw DomainError("pcf_asymptotic: Arg z outside |Arg z| < 3pi/4");
            break;
        case PcfRegime::asym_full:
            if (a < -0.25 * pi) {
                theta = a;
            } else if (a > 0.75 * pi) {
                theta = a - 2.0 * pi;
            } else {
                throw DomainError("pcf_asymptotic: Arg z outside -5pi/4 < Arg z < -pi/4");
            }
            break;
        case PcfRegime::asym_full_mirror:
            if (a > 0.25 * pi) {
                theta = a;
            } else if (a < -0.75 * pi) {
                theta = a + 2.0 * pi;
            } else {
                throw DomainError("pcf_asymptotic: Arg z outside pi/4 < Arg z < 5pi/4");
            }
            break;
    }

    const cplx log_z{std::log(r), theta};
    const cplx z2 = z * z;
    const cplx p = nu;

    const cplx dom_log = -z2 / 4.0 + p * log_z;
    detail::check_exponent(dom_log, "pcf_asymptotic");
    auto [s1, e1] = detail::asymptotic_sum(
        [&](int s) {
            const double k = 2.0 * s;
            return -(p - k) * (p - k - 1.0) / (2.0 * (s + 1) * z2);
        },
        order);
    const cplx dominant = std::exp(dom_log);
    cplx value = dominant * s1;
    double err = std::abs(dominant) * e1;

    if (which == PcfRegime::asym_full || which == PcfRegime::asym_full_mirror) {
        const cplx rec_log = z2 / 4.0 + (-p - 1.0) * log_z;
        const cplx rg = rgamma(-p);
        if (rg != cplx{0.0}) {
            detail::check_exponent(rec_log, "pcf_asymptotic");
            auto [s2, e2] = detail::asymptotic_sum(
                [&](int s) {
                    const double k = 2.0 * s;
                    return (p + 1.0 + k) * (p + 2.0 + k) / (2.0 * (s + 1) * z2);
                },
                order);
            const double sgn = which == PcfRegime::asym_full ? -1.0 : 1.0;
            const cplx stokes = std::sqrt(2.0 * pi) * rg * std::exp(cplx{0.0, sgn} * p * pi);
            const cplx recessive = stokes * std::exp(rec_log);
            value -= recessive * s2;
            err += std::abs(recessive) * e2;
        }
    }
    return {value, err};
}

inline cplx pcf_asymptotic(cplx nu, cplx z, PcfRegime which,
                           AsymptoticOrder order = AsymptoticOrder::optimal,
                           double min_radius = default_crossover_radius) {
    return pcf_asymptotic_detailed(nu, z, which, order, min_radius).value;
}

struct PcfOptions {
    double crossover_radius = default_crossover_radius;
};

/// D_nu(z) for complex order and argument.
inline cplx pcf_d(cplx nu, cplx z, const PcfOptions& opts = {}) {
    if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || !std::isfinite(z.real()) ||
        !std::isfinite(z.imag())) {
        throw DomainError("pcf_d: non-finite input");
    }
    const PcfRegime regime = select_regime(z, opts.crossover_radius);
    if (regime == PcfRegime::series) return detail::pcf_series(nu, z);

    const auto res = pcf_asymptotic_detailed(nu, z, regime, AsymptoticOrder::optimal,
                                             opts.crossover_radius);
    const double scale = std::abs(res.value);
    if (res.error_estimate <= 1e-6 * scale) return res.value;
    // Large |nu| relative to |z|: the expansion has not converged. The series
    // still works a little past the crossover; beyond that report failure.
    if (std::abs(z) <= 2.0 * opts.crossover_radius) return detail::pcf_series(nu, z);
    throw ConvergenceError("pcf_d: asymptotic expansion not converged for |nu| large relative to |z|");
}

}  // namespace lzsm::special
