#pragma once

// Shared domain types for the linearly driven two-level system
//   i hbar d|psi>/dt = -(1/2) (Delta sigma_x + v t sigma_z) |psi>,
// written in the dimensionless time tau = sqrt(v / 2 hbar) t and the
// adiabaticity delta = Delta^2 / (4 v hbar).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lzsm/errors.hpp"

namespace lzsm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Physical drive description plus the derived adiabaticity.
struct DriveParams {
    double gap = 0.0;         // Delta >= 0
    double sweep_rate = 1.0;  // v > 0
    double hbar = 1.0;        // > 0
    double delta = 0.0;       // Delta^2 / (4 v hbar)

    static DriveParams physical(double gap, double sweep_rate, double hbar = 1.0) {
        if (!(gap >= 0.0) || !(sweep_rate > 0.0) || !(hbar > 0.0)) {
            throw DomainError("DriveParams: need gap >= 0, sweep_rate > 0, hbar > 0");
        }
        return DriveParams{gap, sweep_rate, hbar, gap * gap / (4.0 * sweep_rate * hbar)};
    }

    /// Unit sweep rate and hbar; the gap is chosen so that delta is reproduced.
    static DriveParams from_delta(double delta) {
        if (!(delta >= 0.0)) throw DomainError("DriveParams: delta must be >= 0");
        return DriveParams{2.0 * std::sqrt(delta), 1.0, 1.0, delta};
    }

    /// sqrt(v / 2 hbar), the factor mapping physical time to tau.
    double time_scale() const { return std::sqrt(sweep_rate / (2.0 * hbar)); }
};

inline double to_dimensionless(double t, const DriveParams& p) { return p.time_scale() * t; }
inline double from_dimensionless(double tau, const DriveParams& p) { return tau / p.time_scale(); }

/// Amplitudes in the diabatic basis; alpha multiplies |0> (upper entry).
struct Spinor {
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};

    double p_alpha() const { return std::norm(alpha); }
    double p_beta() const { return std::norm(beta); }
    double norm2() const { return std::norm(alpha) + std::norm(beta); }
    bool is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

    friend Spinor operator+(const Spinor& a, const Spinor& b) {
        return {a.alpha + b.alpha, a.beta + b.beta};
    }
    friend Spinor operator*(cplx c, const Spinor& s) { return {c * s.alpha, c * s.beta}; }
};

inline constexpr double ode_norm_tol = 1e-9;
inline constexpr double asymptotic_norm_tol = 1e-6;

enum class Method { ode, zener, majorana, adiabatic_impulse };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::ode: return "ode";
        case Method::zener: return "zener";
        case Method::majorana: return "majorana";
        case Method::adiabatic_impulse: return "adiabatic_impulse";
    }
    return "unknown";
}

inline Method parse_method(std::string_view name) {
    if (name == "ode") return Method::ode;
    if (name == "zener") return Method::zener;
    if (name == "majorana") return Method::majorana;
    if (name == "adiabatic_impulse" || name == "adiabatic-impulse" || name == "ai") {
        return Method::adiabatic_impulse;
    }
    throw DomainError("unknown method '" + std::string(name) + "'");
}

struct Sample {
    double tau;
    Spinor state;
};

struct Trajectory {
    std::vector<Sample> samples;
    Method method = Method::ode;

    /// Largest |norm^2 - 1| over the samples.
    double max_norm_drift() const {
        double d = 0.0;
        for (const auto& s : samples) d = std::max(d, std::abs(s.state.norm2() - 1.0));
        return d;
    }
};

/// 2x2 complex matrix, row-major.
struct TransferMatrix {
    std::array<cplx, 4> m{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};

    static TransferMatrix identity() { return {}; }
    static TransferMatrix diag(cplx a, cplx d) { return {{a, cplx{0.0}, cplx{0.0}, d}}; }

    cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
    cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }

    TransferMatrix adjoint() const {
        return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
    }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        TransferMatrix r;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        }
        return r;
    }

    friend Spinor operator*(const TransferMatrix& a, const Spinor& s) {
        return {a(0, 0) * s.alpha + a(0, 1) * s.beta, a(1, 0) * s.alpha + a(1, 1) * s.beta};
    }

    /// max |(M^dagger M - I)_ij|
    double unitarity_defect() const {
        const TransferMatrix p = adjoint() * *this;
        double d = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
        }
        return d;
    }
};

/// Closed-form single-passage probability exp(-2 pi delta) of staying in the diabatic state.
inline double lzsm_probability(double delta) {
    if (!(delta >= 0.0)) throw DomainError("lzsm_probability: delta must be >= 0");
    return std::exp(-2.0 * pi * delta);
}

/// 1 - exp(-2 pi delta), accurate for small delta.
inline double lzsm_complement(double delta) {
    if (!(delta >= 0.0)) throw DomainError("lzsm_complement: delta must be >= 0");
    return -std::expm1(-2.0 * pi * delta);
}

/// H = -(1/2)(Delta sigma_x + v t sigma_z) in energy units, at the physical
/// time corresponding to tau.
inline TransferMatrix hamiltonian(double tau, const DriveParams& p) {
    const double bias = p.sweep_rate * from_dimensionless(tau, p);
    return {{cplx{-0.5 * bias}, cplx{-0.5 * p.gap}, cplx{-0.5 * p.gap}, cplx{0.5 * bias}}};
}

/// Same Hamiltonian in units of hbar * sqrt(v / 2 hbar), so that
/// i d psi/d tau = H psi:  H = [[-tau, -sqrt(2 delta)], [-sqrt(2 delta), tau]].
inline TransferMatrix dimensionless_hamiltonian(double tau, double delta) {
    const double c = -std::sqrt(2.0 * delta);
    return {{cplx{-tau}, cplx{c}, cplx{c}, cplx{tau}}};
}

}  // namespace lzsm
