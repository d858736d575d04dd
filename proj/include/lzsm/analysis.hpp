#pragma once

// Method comparison, jump time, deviation maps and their tabular output.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "lzsm/adiabatic.hpp"
#include "lzsm/majorana.hpp"
#include "lzsm/model.hpp"
#include "lzsm/oracle.hpp"
#include "lzsm/special.hpp"
#include "lzsm/zener.hpp"

namespace lzsm::analysis {

inline constexpr int schema_version = 1;
inline constexpr double default_window_threshold = 0.02;

// ---------------------------------------------------------------------------
// Jump time

/// chi = pi/4 + Arg Gamma(1/2 - i delta/2) - Arg Gamma(1 - i delta/2).
inline double chi(double delta) {
    if (!(delta >= 0.0)) throw DomainError("chi: delta must be >= 0");
    return 0.25 * pi + special::arg_gamma(cplx{0.5, -0.5 * delta}) - special::arg_gamma(cplx{1.0, -0.5 * delta});
}

/// tau_jump = sqrt(1 - P) / (sqrt(2 delta) cos chi); sqrt(2 pi) at delta = 0.
inline double jump_time(double delta) {
    if (!(delta >= 0.0)) throw DomainError("jump_time: delta must be >= 0");
    if (delta == 0.0) return std::sqrt(2.0 * pi);
    return std::sqrt(lzsm_complement(delta)) / (std::sqrt(2.0 * delta) * std::cos(chi(delta)));
}

/// (1 - P) / P'(0) with P'(0) from a Richardson-extrapolated centred difference of p_of_tau.
inline double jump_time_numeric(double delta, double h = 1e-3) {
    if (!(delta > 0.0)) throw DomainError("jump_time_numeric: need delta > 0");
    if (!(h > 0.0)) throw DomainError("jump_time_numeric: need h > 0");
    auto p = [delta](double t) { return zener::p_of_tau(t, delta); };
    const double d1 = (p(h) - p(-h)) / (2.0 * h);
    const double d2 = (p(0.5 * h) - p(-0.5 * h)) / h;
    return lzsm_complement(delta) / ((4.0 * d2 - d1) / 3.0);
}

inline bool in_jump_window(double tau, double delta) { return std::abs(tau) < jump_time(delta); }

/// Occupations normalised by the spinor norm (asymptotic spinors are only
/// normalised up to O(1/tau^2)).
inline std::pair<double, double> occupations(const Spinor& s) {
    const double n = s.norm2();
    return {s.p_alpha() / n, s.p_beta() / n};
}

// ---------------------------------------------------------------------------
// Sweep configuration

enum class Format { csv, json };

inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw DomainError("unknown format '" + std::string(s) + "'");
}

struct TauGrid {
    double start = -8.0;
    double end = 8.0;
    int count = 161;

    std::vector<double> points() const {
        std::vector<double> g(static_cast<std::size_t>(count));
        const double step = (end - start) / (count - 1);
        for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = start + step * i;
        g.back() = end;
        return g;
    }
};

struct SweepConfig {
    std::vector<double> delta_values{0.1};
    TauGrid tau_grid;
    Spinor init{cplx{0.0}, cplx{1.0}};  // in-state at tau -> -infinity
    std::vector<Method> methods{Method::ode, Method::zener, Method::majorana, Method::adiabatic_impulse};
    std::string output_path;
    Format format = Format::csv;

    void validate() const {
        if (!(tau_grid.count >= 2)) throw DomainError("SweepConfig: tau grid needs count >= 2");
        if (!(tau_grid.start < tau_grid.end)) throw DomainError("SweepConfig: tau grid needs start < end");
        if (delta_values.empty()) throw DomainError("SweepConfig: delta_values must not be empty");
        for (double d : delta_values) {
            if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("SweepConfig: delta values must be >= 0");
        }
        if (methods.empty()) throw DomainError("SweepConfig: no methods selected");
        if (!init.is_normalized(asymptotic_norm_tol)) throw DomainError("SweepConfig: init must be normalized");
    }
};

/// n evenly spaced values a..b (n = 1 gives a).
inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw DomainError("linspace: need n >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

// ---------------------------------------------------------------------------
// Parallel map with index-ordered results

template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) slots[i].emplace(f(i));
        }));
    }
    for (auto& j : jobs) j.get();
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// compare_dynamics

struct Row {
    double tau = 0.0;
    double delta = 0.0;
    Method method = Method::ode;
    Spinor state{cplx{std::numeric_limits<double>::quiet_NaN()}, cplx{std::numeric_limits<double>::quiet_NaN()}};
    bool ok = false;
    bool in_jump_window = false;
    std::string error;  // empty when ok
};

struct DeltaSummary {
    double delta = 0.0;
    double tau_jump = 0.0;
    // first/last tau where the Majorana occupation differs from the exact one by more than the threshold
    std::optional<double> window_first;
    std::optional<double> window_last;
};

struct ComparisonTable {
    std::vector<Row> rows;  // ordered by delta, then method, then tau
    std::vector<DeltaSummary> summaries;
    double window_threshold = default_window_threshold;
};

namespace detail {

inline std::vector<Row> run_method(Method m, double delta, const std::vector<double>& grid, const Spinor& init) {
    std::vector<Row> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rows[i].tau = grid[i];
        rows[i].delta = delta;
        rows[i].method = m;
        rows[i].in_jump_window = in_jump_window(grid[i], delta);
    }
    auto fill = [&](std::size_t i, auto&& eval) {
        try {
            rows[i].state = eval(grid[i]);
            rows[i].ok = true;
        } catch (const DomainError& e) {
            rows[i].error = e.what();
        }
    };
    switch (m) {
        case Method::zener: {
            const auto c = zener::asymptotic_coefficients(init, delta);
            for (std::size_t i = 0; i < grid.size(); ++i) fill(i, [&](double t) { return zener::eval_zener(c, t); });
            break;
        }
        case Method::majorana: {
            const auto sol = majorana::MajoranaSolution::make(delta);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                fill(i, [&](double t) { return majorana::general_solution(sol, t, init); });
            }
            break;
        }
        case Method::adiabatic_impulse:
            for (std::size_t i = 0; i < grid.size(); ++i) fill(i, [&](double t) { return adiabatic::evolve(t, delta, init); });
            break;
        case Method::ode: {
            // seeded with the exact state at the first grid point
            const auto c = zener::asymptotic_coefficients(init, delta);
            const Spinor start = zener::eval_zener(c, grid.front());
            const Trajectory tr = oracle::integrate_on_grid(start, grid, delta);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                rows[i].state = tr.samples[i].state;
                rows[i].ok = true;
            }
            break;
        }
    }
    return rows;
}

}  // namespace detail

/// Every requested method on the shared tau grid, per delta.
inline ComparisonTable compare_dynamics(const SweepConfig& cfg, double window_threshold = default_window_threshold) {
    cfg.validate();
    const auto grid = cfg.tau_grid.points();
    const std::size_t nm = cfg.methods.size();
    auto cells = parallel_map(cfg.delta_values.size() * nm, [&](std::size_t k) {
        return detail::run_method(cfg.methods[k % nm], cfg.delta_values[k / nm], grid, cfg.init);
    });

    ComparisonTable out;
    out.window_threshold = window_threshold;
    for (auto& c : cells) out.rows.insert(out.rows.end(), c.begin(), c.end());

    for (double d : cfg.delta_values) {
        DeltaSummary s{d, jump_time(d), std::nullopt, std::nullopt};
        const auto exact = zener::asymptotic_coefficients(cfg.init, d);
        const auto sol = majorana::MajoranaSolution::make(d);
        for (double t : grid) {
            if (std::abs(t) < sol.tau_min) continue;
            const double pz = zener::eval_zener(exact, t).p_alpha();
            const double pm = occupations(majorana::general_solution(sol, t, cfg.init)).first;
            if (std::abs(pz - pm) > window_threshold) {
                if (!s.window_first) s.window_first = t;
                s.window_last = t;
            }
        }
        out.summaries.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Deviation map

struct DeviationMap {
    std::vector<double> taus;
    std::vector<double> deltas;
    // grid[i][j] = |P_Z - P_M| at deltas[i], taus[j]; NaN where the asymptotic guard fired
    std::vector<std::vector<double>> grid;
    std::vector<std::vector<double>> p_zener;
    std::vector<std::vector<double>> p_majorana;
    std::vector<double> jump_curve;  // tau_jump per delta

    bool flagged(std::size_t i, std::size_t j) const { return std::isnan(grid[i][j]); }
};

/// |P_Z - P_M| over (delta, tau): P_Z = |alpha|^2 of the exact solution, P_M the
/// normalized upper occupation of beta_i psi1 + alpha_i psi2. Normalizing keeps
/// cells in [0, 1] where the asymptotic norm blows up near tau = 0.
inline DeviationMap deviation_map(const std::vector<double>& deltas, const std::vector<double>& taus,
                                  const Spinor& init) {
    if (deltas.empty() || taus.empty()) throw DomainError("deviation_map: empty range");
    for (double d : deltas) {
        if (!(d > 0.0)) throw DomainError("deviation_map: delta values must be > 0");
    }
    if (!init.is_normalized(asymptotic_norm_tol)) throw DomainError("deviation_map: init must be normalized");
    const double nan = std::numeric_limits<double>::quiet_NaN();

    struct RowOut {
        std::vector<double> dev, pz, pm;
    };
    auto rows = parallel_map(deltas.size(), [&](std::size_t i) {
        const double d = deltas[i];
        const auto exact = zener::asymptotic_coefficients(init, d);
        const auto sol = majorana::MajoranaSolution::make(d);
        RowOut r{std::vector<double>(taus.size(), nan), std::vector<double>(taus.size(), nan),
                 std::vector<double>(taus.size(), nan)};
        for (std::size_t j = 0; j < taus.size(); ++j) {
            r.pz[j] = zener::eval_zener(exact, taus[j]).p_alpha();
            try {
                r.pm[j] = occupations(majorana::general_solution(sol, taus[j], init)).first;
                r.dev[j] = std::abs(r.pz[j] - r.pm[j]);
            } catch (const DomainError&) {
            }
        }
        return r;
    });

    DeviationMap m;
    m.taus = taus;
    m.deltas = deltas;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        m.grid.push_back(std::move(rows[i].dev));
        m.p_zener.push_back(std::move(rows[i].pz));
        m.p_majorana.push_back(std::move(rows[i].pm));
        m.jump_curve.push_back(jump_time(deltas[i]));
    }
    return m;
}

/// Deviation-weighted mean tau of the cells above the threshold; its sign
/// tells on which side of the crossing the map is skewed.
inline double signed_centroid(const DeviationMap& m, double threshold = default_window_threshold) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < m.deltas.size(); ++i) {
        for (std::size_t j = 0; j < m.taus.size(); ++j) {
            const double v = m.grid[i][j];
            if (std::isnan(v) || !(v > threshold)) continue;
            num += v * m.taus[j];
            den += v;
        }
    }
    return den > 0.0 ? num / den : 0.0;
}

struct WindowMeans {
    double inside = 0.0;   // mean over |tau| < tau_jump
    double outside = 0.0;  // mean over |tau| >= tau_jump
};

inline WindowMeans window_means(const DeviationMap& m, std::size_t row) {
    double si = 0.0, so = 0.0;
    int ni = 0, no = 0;
    for (std::size_t j = 0; j < m.taus.size(); ++j) {
        const double v = m.grid[row][j];
        if (std::isnan(v)) continue;
        if (std::abs(m.taus[j]) < m.jump_curve[row]) {
            si += v;
            ++ni;
        } else {
            so += v;
            ++no;
        }
    }
    return {ni ? si / ni : 0.0, no ? so / no : 0.0};
}

// ---------------------------------------------------------------------------
// Output

/// 17 significant digits, correctly rounded; identical on every run.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline constexpr const char* trajectory_header =
    "tau,method,re_alpha,im_alpha,re_beta,im_beta,p_alpha,p_beta,norm,in_jump_window";
inline constexpr const char* deviation_header = "tau,delta,p_zener,p_majorana,abs_diff,tau_jump";

inline void write_schema_comment(std::ostream& os) { os << "# schema_version: " << schema_version << '\n'; }

inline void write_rows_csv(std::ostream& os, const std::vector<Row>& rows, double delta) {
    write_schema_comment(os);
    os << "# delta: " << format_number(delta) << '\n';
    os << trajectory_header << '\n';
    for (const auto& r : rows) {
        const Spinor& s = r.state;
        os << format_number(r.tau) << ',' << method_name(r.method) << ',' << format_number(s.alpha.real()) << ','
           << format_number(s.alpha.imag()) << ',' << format_number(s.beta.real()) << ','
           << format_number(s.beta.imag()) << ',' << format_number(s.p_alpha()) << ','
           << format_number(s.p_beta()) << ',' << format_number(s.norm2()) << ',' << (r.in_jump_window ? 1 : 0)
           << '\n';
    }
}

inline void write_deviation_csv(std::ostream& os, const DeviationMap& m) {
    write_schema_comment(os);
    os << deviation_header << '\n';
    for (std::size_t i = 0; i < m.deltas.size(); ++i) {
        for (std::size_t j = 0; j < m.taus.size(); ++j) {
            os << format_number(m.taus[j]) << ',' << format_number(m.deltas[i]) << ','
               << format_number(m.p_zener[i][j]) << ',' << format_number(m.p_majorana[i][j]) << ','
               << format_number(m.grid[i][j]) << ',' << format_number(m.jump_curve[i]) << '\n';
        }
    }
}

}  // namespace lzsm::analysis
