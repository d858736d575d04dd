#pragma once

// Reference numerics: adaptive DOP853 integration of
//   f' = i sqrt(2 delta) g e^{-i tau^2},   g' = i sqrt(2 delta) f e^{i tau^2},
// with alpha = f e^{i tau^2/2}, beta = g e^{-i tau^2/2}, and a direct
// quadrature of the inverse Laplace integral along the steepest-descent line.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "lzsm/detail/dop853_tableau.hpp"
#include "lzsm/majorana.hpp"
#include "lzsm/model.hpp"
#include "lzsm/quadrature.hpp"

namespace lzsm::oracle {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1.0;
    // The tolerances above bound the global error; each step is held to
    // local_factor times them, since ~1e5 steps accumulate.
    double local_factor = 1e-2;
    bool dense_output = false;  // record every accepted step in integrate()
    long max_steps = 50'000'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0) || !(local_factor > 0.0) ||
            !(local_factor <= 1.0)) {
            throw DomainError("IntegratorConfig: tolerances and max_step must be positive");
        }
    }
};

namespace detail {

using State = std::array<cplx, 2>;

/// e^{i t^2}, with the phase reduced modulo 2pi in extended precision.
inline cplx chirp(long double t) {
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    const long double ph = std::fmod(t * t, two_pi);
    return std::polar(1.0, static_cast<double>(ph));
}

inline State to_fg(const Spinor& s, long double t) {
    const cplx e = std::polar(1.0, static_cast<double>(std::fmod(0.5L * t * t, 6.283185307179586476925286766559L)));
    return {s.alpha * std::conj(e), s.beta * e};
}

inline Spinor from_fg(const State& y, long double t) {
    const cplx e = std::polar(1.0, static_cast<double>(std::fmod(0.5L * t * t, 6.283185307179586476925286766559L)));
    return {y[0] * e, y[1] * std::conj(e)};
}

class Dop853 {
public:
    Dop853(double delta, const IntegratorConfig& cfg, const State& y0, double t0)
        : k_(std::sqrt(2.0 * delta)), cfg_(cfg), y_(y0), t_hi_(t0) {}

    long double time() const { return static_cast<long double>(t_hi_) - static_cast<long double>(t_lo_); }
    const State& state() const { return y_; }

    /// Steps until the target time is hit exactly; on_step is called after
    /// every accepted step with (t, y).
    template <class OnStep>
    void advance_to(double target, OnStep&& on_step) {
        const double dir = target >= t_hi_ ? 1.0 : -1.0;
        if (h_ == 0.0) h_ = initial_step();
        while (dir * (target - current()) > 0.0) {
            const double remaining = target - current();
            double h = dir * std::min({std::abs(h_), cfg_.max_step, std::abs(remaining)});
            bool last = std::abs(h) >= std::abs(remaining);
            for (;;) {
                if (++steps_ > cfg_.max_steps) throw IntegrationError("DOP853: step budget exhausted", current());
                const double min_step = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(current()));
                if (std::abs(h) < min_step) throw IntegrationError("DOP853: step size underflow", current());
                State y_new;
                const double err = try_step(h, y_new);
                if (err <= 1.0) {
                    y_ = y_new;
                    if (last) {
                        t_hi_ = target;
                        t_lo_ = 0.0;
                    } else {
                        add_time(h);
                    }
                    const double fac = err == 0.0 ? 10.0 : std::min(10.0, 0.9 * std::pow(err, -1.0 / 8.0));
                    // a step shortened to land on the target does not shrink the next one
                    const double next = h * fac;
                    h_ = (last && std::abs(next) < std::abs(h_)) ? h_ : next;
                    on_step(time(), y_);
                    break;
                }
                h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 8.0));
                h_ = h;
                last = false;
            }
        }
    }

private:
    double current() const { return t_hi_ - t_lo_; }

    // Kahan-compensated accumulation of tau; t_lo_ holds the lost low-order part (negated).
    void add_time(double h) {
        const double y = h - t_lo_;
        const double t = t_hi_ + y;
        t_lo_ = (t - t_hi_) - y;
        t_hi_ = t;
    }

    State rhs(long double t, const State& y) const {
        const cplx e = chirp(t);
        const cplx ik{0.0, k_};
        return {ik * y[1] * std::conj(e), ik * y[0] * e};
    }

    double initial_step() const {
        const double t = std::abs(current());
        // resolve the chirp period near the start
        return std::min(cfg_.max_step, 0.05 / (1.0 + t));
    }

    double try_step(double h, State& y_new) const {
        namespace tab = lzsm::detail::dop853;
        const long double t0 = time();
        std::array<State, tab::stages + 1> k;
        k[0] = rhs(t0, y_);
        for (int s = 1; s < tab::stages; ++s) {
            State ys = y_;
            for (int j = 0; j < s; ++j) {
                const double a = tab::a[s][j];
                if (a == 0.0) continue;
                ys[0] += h * a * k[static_cast<std::size_t>(j)][0];
                ys[1] += h * a * k[static_cast<std::size_t>(j)][1];
            }
            k[static_cast<std::size_t>(s)] = rhs(t0 + static_cast<long double>(tab::c[s]) * h, ys);
        }
        y_new = y_;
        for (int s = 0; s < tab::stages; ++s) {
            y_new[0] += h * tab::b[s] * k[static_cast<std::size_t>(s)][0];
            y_new[1] += h * tab::b[s] * k[static_cast<std::size_t>(s)][1];
        }
        k[tab::stages] = rhs(t0 + h, y_new);

        double e5n = 0.0;
        double e3n = 0.0;
        for (int c = 0; c < 2; ++c) {
            cplx e3{0.0};
            cplx e5{0.0};
            for (int s = 0; s <= tab::stages; ++s) {
                e3 += tab::e3[s] * k[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
                e5 += tab::e5[s] * k[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
            }
            const double sc = cfg_.local_factor * cfg_.abs_tol + cfg_.local_factor * cfg_.rel_tol * std::max(std::abs(y_[static_cast<std::size_t>(c)]),
                                                                     std::abs(y_new[static_cast<std::size_t>(c)]));
            e3n += std::norm(e3 / sc);
            e5n += std::norm(e5 / sc);
        }
        if (e5n == 0.0 && e3n == 0.0) return 0.0;
        return std::abs(h) * e5n / std::sqrt((e5n + 0.01 * e3n) * 2.0);
    }

    double k_;
    IntegratorConfig cfg_;
    State y_;
    double t_hi_;
    double t_lo_ = 0.0;
    double h_ = 0.0;
    long steps_ = 0;
};

inline void check_init(const Spinor& init, const char* who) {
    if (!init.is_normalized(asymptotic_norm_tol)) {
        throw DomainError(std::string(who) + ": initial spinor is not normalized");
    }
}

}  // namespace detail

/// State at tau_f of the trajectory through init at tau_i; either direction.
inline Spinor evolve(const Spinor& init, double tau_i, double tau_f, double delta,
                     const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (!(delta >= 0.0)) throw DomainError("evolve: delta must be >= 0");
    if (!std::isfinite(tau_i) || !std::isfinite(tau_f)) throw DomainError("evolve: non-finite time");
    if (tau_i == tau_f) return init;
    detail::Dop853 st(delta, cfg, detail::to_fg(init, tau_i), tau_i);
    st.advance_to(tau_f, [](long double, const detail::State&) {});
    return detail::from_fg(st.state(), st.time());
}

/// Trajectory sampled exactly at the given strictly increasing grid; the
/// first grid point is the initial time.
inline Trajectory integrate_on_grid(const Spinor& init, const std::vector<double>& grid, double delta,
                                    const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (!(delta >= 0.0)) throw DomainError("integrate_on_grid: delta must be >= 0");
    if (grid.size() < 2) throw DomainError("integrate_on_grid: need at least two grid points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw DomainError("integrate_on_grid: grid must be strictly increasing");
    }
    detail::check_init(init, "integrate_on_grid");
    Trajectory tr;
    tr.method = Method::ode;
    tr.samples.reserve(grid.size());
    tr.samples.push_back({grid.front(), init});
    detail::Dop853 st(delta, cfg, detail::to_fg(init, grid.front()), grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        st.advance_to(grid[i], [](long double, const detail::State&) {});
        tr.samples.push_back({grid[i], detail::from_fg(st.state(), st.time())});
    }
    return tr;
}

/// Integrates from tau_i to tau_f (tau_i < tau_f). With dense_output every
/// accepted step is recorded, otherwise only the two end points.
inline Trajectory integrate(const Spinor& init, double tau_i, double tau_f, double delta,
                            const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (!(tau_i < tau_f)) throw DomainError("integrate: need tau_i < tau_f");
    if (!(delta >= 0.0)) throw DomainError("integrate: delta must be >= 0");
    detail::check_init(init, "integrate");
    Trajectory tr;
    tr.method = Method::ode;
    tr.samples.push_back({tau_i, init});
    detail::Dop853 st(delta, cfg, detail::to_fg(init, tau_i), tau_i);
    if (cfg.dense_output) {
        st.advance_to(tau_f, [&](long double t, const detail::State& y) {
            tr.samples.push_back({static_cast<double>(t), detail::from_fg(y, t)});
        });
    } else {
        st.advance_to(tau_f, [](long double, const detail::State&) {});
        tr.samples.push_back({tau_f, detail::from_fg(st.state(), st.time())});
    }
    return tr;
}

/// Columns are the evolved basis states (1,0) and (0,1).
inline TransferMatrix propagator(double tau_i, double tau_f, double delta, const IntegratorConfig& cfg = {}) {
    const Spinor c0 = evolve({cplx{1.0}, cplx{0.0}}, tau_i, tau_f, delta, cfg);
    const Spinor c1 = evolve({cplx{0.0}, cplx{1.0}}, tau_i, tau_f, delta, cfg);
    return {{c0.alpha, c1.alpha, c0.beta, c1.beta}};
}

// ---------------------------------------------------------------------------
// Inverse Laplace transform along the steepest-descent line

struct SaddleContourSpec {
    cplx z0{0.0, -2.0};             // saddle in z = s / tau
    double inclination = 0.75 * pi;  // tangent angle of the descent line
    int node_count = 256;            // Gauss-Legendre nodes per piece
    double extent = 14.0;            // half-length of the line in the s-plane; the integrand there is e^{-extent^2/4}
    bool near_zero_loop = true;      // add the loop around the branch point for tau > 0

    void validate() const {
        if (std::abs(z0 - cplx{0.0, -2.0}) > 1e-15 || std::abs(inclination - 0.75 * pi) > 1e-15) {
            throw DomainError("SaddleContourSpec: saddle and inclination are fixed at -2i and 3pi/4");
        }
        if (node_count < 64) throw DomainError("SaddleContourSpec: node_count must be >= 64");
        if (!(extent > 0.0)) throw DomainError("SaddleContourSpec: extent must be positive");
    }
};

/// f(tau) = integral of e^{s tau} F(s) ds over the deformed Bromwich contour,
/// F(s) = C_delta e^{-i s^2/4} s^{-1-i delta}. The s-plane line is
/// s = tau z0 + e^{i 3pi/4} r; for tau > 0 it crosses the cut at s = -2 tau,
/// where the contour detours around the branch point (two sides of the cut
/// plus a small circle).
inline cplx inverse_laplace_numeric(double tau, double delta, const SaddleContourSpec& spec = {}) {
    spec.validate();
    if (!(delta > 0.0)) throw DomainError("inverse_laplace_numeric: need delta > 0");
    if (!(std::abs(tau) >= 2.0)) throw DomainError("inverse_laplace_numeric: need |tau| >= 2");

    const auto rule = quadrature::gauss_legendre(spec.node_count);
    const cplx mu{-1.0, -delta};
    const cplx s0 = tau * spec.z0;
    const cplx dir = std::polar(1.0, spec.inclination);
    auto on_line = [&](double r) {
        const cplx s = s0 + dir * r;
        return std::exp(s * tau - cplx{0.0, 0.25} * s * s + mu * std::log(s)) * dir;
    };

    cplx total{0.0};
    const double r_cut = 2.0 * std::sqrt(2.0) * tau;  // crossing of the negative axis when tau > 0
    if (tau > 0.0 && r_cut < spec.extent) {
        total += quadrature::integrate(rule, on_line, -spec.extent, r_cut);
        total += quadrature::integrate(rule, on_line, r_cut, spec.extent);
    } else {
        total += quadrature::integrate(rule, on_line, -spec.extent, spec.extent);
    }

    if (tau > 0.0 && spec.near_zero_loop) {
        const double x_max = std::min(2.0 * tau, 40.0 / tau);
        const double rho = std::min(1.0 / tau, 0.5 * x_max);
        // both sides of the cut, x = e^u
        auto side = [&](double u) {
            const double x = std::exp(u);
            return std::exp(cplx{-x * tau, -0.25 * x * x} + cplx{0.0, -delta} * u);
        };
        total += 2.0 * std::sinh(pi * delta) * quadrature::integrate(rule, side, std::log(rho), std::log(x_max));
        // circle |s| = rho, counter-clockwise from -pi to pi
        const cplx rho_pow = std::exp(cplx{0.0, -delta} * std::log(rho));
        auto circle = [&](double th) {
            const cplx s = std::polar(rho, th);
            return cplx{0.0, 1.0} * rho_pow * std::exp(delta * th) * std::exp(s * tau - cplx{0.0, 0.25} * s * s);
        };
        total += quadrature::integrate(rule, circle, -pi, pi);
    }
    return majorana::c_delta(delta) * total;
}

}  // namespace lzsm::oracle
