#pragma once

// Command-line front end. Needs the vendored CLI11 and nlohmann/json headers.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lzsm/adiabatic.hpp"
#include "lzsm/analysis.hpp"
#include "lzsm/model.hpp"

namespace lzsm::cli {

enum ExitCode : int { ok = 0, usage = 2, numerical = 3, io = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline std::vector<double> split_numbers(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "' in '" + text + "'");
        }
    }
    return out;
}

/// "re_a,im_a,re_b,im_b" or "a,b" (real amplitudes).
inline Spinor parse_init(const std::string& text) {
    const auto v = split_numbers(text, ',');
    Spinor s;
    if (v.size() == 2) {
        s = {cplx{v[0]}, cplx{v[1]}};
    } else if (v.size() == 4) {
        s = {cplx{v[0], v[1]}, cplx{v[2], v[3]}};
    } else {
        throw UsageError("--init expects 2 or 4 comma-separated numbers");
    }
    if (!s.is_normalized(asymptotic_norm_tol)) throw UsageError("--init must be normalized (|a|^2 + |b|^2 = 1)");
    return s;
}

/// "a:b:n"
inline std::vector<double> parse_delta_range(const std::string& text) {
    const auto v = split_numbers(text, ':');
    if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) {
        throw UsageError("--delta-range expects a:b:n with integer n >= 1");
    }
    return analysis::linspace(v[0], v[1], static_cast<int>(v[2]));
}

inline std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) {
        std::stringstream ss(n);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(parse_method(item));
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
        }
    }
    return out;
}

inline json spinor_json(const Spinor& s) { return json::array({s.alpha.real(), s.alpha.imag(), s.beta.real(), s.beta.imag()}); }

/// Reads a JSON config mirroring SweepConfig; unknown keys are rejected.
inline void load_config(const std::string& path, analysis::SweepConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            const json& v = it.value();
            if (key == "delta_values") {
                cfg.delta_values = v.get<std::vector<double>>();
            } else if (key == "tau_grid") {
                for (auto g = v.begin(); g != v.end(); ++g) {
                    if (g.key() == "start") cfg.tau_grid.start = g.value().get<double>();
                    else if (g.key() == "end") cfg.tau_grid.end = g.value().get<double>();
                    else if (g.key() == "count") cfg.tau_grid.count = g.value().get<int>();
                    else throw UsageError("config: unknown key 'tau_grid." + g.key() + "'");
                }
            } else if (key == "init") {
                const auto a = v.get<std::vector<double>>();
                std::string text;
                for (std::size_t i = 0; i < a.size(); ++i) text += (i ? "," : "") + analysis::format_number(a[i]);
                cfg.init = parse_init(text);
            } else if (key == "methods") {
                cfg.methods = parse_methods(v.get<std::vector<std::string>>());
            } else if (key == "output_path") {
                cfg.output_path = v.get<std::string>();
            } else if (key == "format") {
                cfg.format = analysis::parse_format(v.get<std::string>());
            } else {
                throw UsageError("config: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    } catch (const DomainError& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
}

inline json config_json(const analysis::SweepConfig& cfg) {
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(std::string(method_name(m)));
    return {{"delta_values", cfg.delta_values},
            {"tau_grid", {{"start", cfg.tau_grid.start}, {"end", cfg.tau_grid.end}, {"count", cfg.tau_grid.count}}},
            {"init", spinor_json(cfg.init)},
            {"methods", methods},
            {"format", cfg.format == analysis::Format::csv ? "csv" : "json"}};
}

/// Writes through a temporary file and renames, so a failed run leaves no partial output.
inline void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        out << content;
        if (!out) throw IoError("write to '" + path + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move output into place at '" + path + "': " + ec.message());
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

/// "run.csv" -> "run.delta-2.csv"
inline std::string indexed_path(const std::string& path, std::size_t k) {
    std::filesystem::path p(path);
    const std::string ext = p.extension().string();
    p.replace_extension();
    return p.string() + ".delta-" + std::to_string(k) + ext;
}

inline std::string rows_text(const std::vector<analysis::Row>& rows, double delta, analysis::Format fmt) {
    std::ostringstream os;
    if (fmt == analysis::Format::csv) {
        analysis::write_rows_csv(os, rows, delta);
        return os.str();
    }
    json arr = json::array();
    for (const auto& r : rows) {
        json o{{"tau", r.tau}, {"method", std::string(method_name(r.method))}, {"in_jump_window", r.in_jump_window}};
        if (r.ok) {
            o["alpha"] = {r.state.alpha.real(), r.state.alpha.imag()};
            o["beta"] = {r.state.beta.real(), r.state.beta.imag()};
            o["p_alpha"] = r.state.p_alpha();
            o["p_beta"] = r.state.p_beta();
            o["norm"] = r.state.norm2();
        } else {
            o["error"] = r.error;
        }
        arr.push_back(o);
    }
    return json{{"schema_version", analysis::schema_version}, {"delta", delta}, {"rows", arr}}.dump(1) + "\n";
}

struct CommonOptions {
    std::vector<double> delta;
    std::string delta_range;
    double tau_start = 0.0, tau_end = 0.0;
    int tau_count = 0;
    std::string init;
    std::vector<std::string> methods;
    std::string out;
    std::string format;
    std::string config;
};

inline void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--delta", o.delta, "adiabaticity value(s)");
    app->add_option("--delta-range", o.delta_range, "a:b:n evenly spaced adiabaticity values");
    app->add_option("--tau-start", o.tau_start, "first grid time");
    app->add_option("--tau-end", o.tau_end, "last grid time");
    app->add_option("--tau-count", o.tau_count, "number of grid times (>= 2)");
    app->add_option("--init", o.init, "in-state re_a,im_a,re_b,im_b or a,b");
    app->add_option("--method,--methods", o.methods, "ode, zener, majorana, adiabatic_impulse (comma list allowed)");
    app->add_option("--out", o.out, "output file (stdout if omitted)");
    app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--config", o.config, "JSON file mirroring the sweep configuration");
}

/// Config file first, explicit flags on top.
inline analysis::SweepConfig build_config(CLI::App* app, const CommonOptions& o, analysis::SweepConfig cfg) {
    if (!o.config.empty()) load_config(o.config, cfg);
    if (app->count("--delta")) cfg.delta_values = o.delta;
    if (app->count("--delta-range")) cfg.delta_values = parse_delta_range(o.delta_range);
    if (app->count("--tau-start")) cfg.tau_grid.start = o.tau_start;
    if (app->count("--tau-end")) cfg.tau_grid.end = o.tau_end;
    if (app->count("--tau-count")) cfg.tau_grid.count = o.tau_count;
    if (app->count("--init")) cfg.init = parse_init(o.init);
    if (app->count("--method")) cfg.methods = parse_methods(o.methods);
    if (app->count("--out")) cfg.output_path = o.out;
    if (app->count("--format")) cfg.format = analysis::parse_format(o.format);
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

inline int run_simulate_or_compare(const analysis::SweepConfig& cfg, bool single_method, std::ostream& out) {
    if (single_method && cfg.methods.size() != 1) throw UsageError("simulate takes exactly one --method");
    const bool to_stdout = cfg.output_path.empty() || cfg.output_path == "-";
    if (to_stdout && cfg.delta_values.size() != 1) throw UsageError("several delta values need --out");

    const auto table = analysis::compare_dynamics(cfg);
    const std::size_t per_delta = table.rows.size() / cfg.delta_values.size();
    json meta_deltas = json::array();
    for (std::size_t k = 0; k < cfg.delta_values.size(); ++k) {
        std::vector<analysis::Row> rows(table.rows.begin() + static_cast<std::ptrdiff_t>(k * per_delta),
                                        table.rows.begin() + static_cast<std::ptrdiff_t>((k + 1) * per_delta));
        const std::string path =
            cfg.delta_values.size() == 1 ? cfg.output_path : indexed_path(cfg.output_path, k);
        emit(path, rows_text(rows, cfg.delta_values[k], cfg.format), out);

        const auto& s = table.summaries[k];
        json d{{"delta", s.delta}, {"tau_jump", s.tau_jump}, {"file", path}};
        d["measured_window"] = s.window_first ? json{{"first", *s.window_first}, {"last", *s.window_last}} : json(nullptr);
        meta_deltas.push_back(d);
    }
    if (!to_stdout) {
        const json meta{{"schema_version", analysis::schema_version},
                        {"config", config_json(cfg)},
                        {"window_threshold", table.window_threshold},
                        {"deltas", meta_deltas}};
        write_file(cfg.output_path + ".meta.json", meta.dump(1) + "\n");
    }
    return ExitCode::ok;
}

inline int run_sweep(const analysis::SweepConfig& cfg, std::ostream& out) {
    for (double d : cfg.delta_values) {
        if (!(d > 0.0)) throw UsageError("sweep needs delta values > 0");
    }
    const auto taus = cfg.tau_grid.points();
    const auto map = analysis::deviation_map(cfg.delta_values, taus, cfg.init);
    std::string body;
    if (cfg.format == analysis::Format::csv) {
        std::ostringstream os;
        analysis::write_deviation_csv(os, map);
        body = os.str();
    } else {
        json cells = json::array();
        for (std::size_t i = 0; i < map.deltas.size(); ++i) {
            for (std::size_t j = 0; j < map.taus.size(); ++j) {
                cells.push_back({{"tau", map.taus[j]},
                                 {"delta", map.deltas[i]},
                                 {"p_zener", map.p_zener[i][j]},
                                 {"p_majorana", map.flagged(i, j) ? json(nullptr) : json(map.p_majorana[i][j])},
                                 {"abs_diff", map.flagged(i, j) ? json(nullptr) : json(map.grid[i][j])},
                                 {"tau_jump", map.jump_curve[i]}});
            }
        }
        body = json{{"schema_version", analysis::schema_version}, {"cells", cells}}.dump(1) + "\n";
    }
    emit(cfg.output_path, body, out);

    const bool to_stdout = cfg.output_path.empty() || cfg.output_path == "-";
    if (!to_stdout) {
        json rows = json::array();
        for (std::size_t i = 0; i < map.deltas.size(); ++i) {
            const auto wm = analysis::window_means(map, i);
            rows.push_back({{"delta", map.deltas[i]},
                            {"tau_jump", map.jump_curve[i]},
                            {"mean_inside", wm.inside},
                            {"mean_outside", wm.outside}});
        }
        const json meta{{"schema_version", analysis::schema_version},
                        {"config", config_json(cfg)},
                        {"threshold", analysis::default_window_threshold},
                        {"signed_centroid", analysis::signed_centroid(map)},
                        {"rows", rows}};
        write_file(cfg.output_path + ".meta.json", meta.dump(1) + "\n");
    }
    return ExitCode::ok;
}

struct ProbeOptions {
    std::string what;
    double delta = 0.0;
    double tau_a = 10.0;
    std::string zeta_mode = "quadrature";
    std::string out;
};

inline int run_probe(const ProbeOptions& p, std::ostream& out) {
    double value = 0.0;
    json j{{"schema_version", analysis::schema_version}, {"what", p.what}, {"delta", p.delta}};
    try {
        if (p.what == "lzsm-prob") {
            value = lzsm_probability(p.delta);
        } else if (p.what == "stokes-phase") {
            value = adiabatic::stokes_phase(p.delta);
        } else if (p.what == "jump-time") {
            value = analysis::jump_time(p.delta);
        } else {
            const auto mode = p.zeta_mode == "asymptotic" ? adiabatic::ZetaMode::asymptotic : adiabatic::ZetaMode::quadrature;
            value = adiabatic::zeta(p.tau_a, p.delta, mode);
            j["tau_a"] = p.tau_a;
            j["mode"] = p.zeta_mode;
        }
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    j["value"] = value;
    emit(p.out, j.dump() + "\n", out);
    return ExitCode::ok;
}

inline void diagnostic(std::ostream& err, const std::string& kind, const std::string& message,
                       const json& extra = json::object()) {
    json d{{"error", kind}, {"message", message}, {"schema_version", analysis::schema_version}};
    d.update(extra);
    err << d.dump() << '\n';
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Single-passage dynamics of a linearly driven two-level system"};
    app.require_subcommand(1);

    detail::CommonOptions sim_o, cmp_o, swp_o;
    auto* sim = app.add_subcommand("simulate", "one method on a tau grid (CSV or JSON)");
    detail::add_common(sim, sim_o);
    auto* cmp = app.add_subcommand("compare", "all selected methods on a shared tau grid");
    detail::add_common(cmp, cmp_o);
    auto* swp = app.add_subcommand("sweep", "deviation map |P_Z - P_M| over (tau, delta)");
    detail::add_common(swp, swp_o);

    detail::ProbeOptions probe_o;
    auto* probe = app.add_subcommand("probe", "scalar quantities as JSON");
    probe->add_option("--what", probe_o.what, "lzsm-prob | stokes-phase | jump-time | zeta")
        ->required()
        ->check(CLI::IsMember({"lzsm-prob", "stokes-phase", "jump-time", "zeta"}));
    probe->add_option("--delta", probe_o.delta, "adiabaticity")->required();
    probe->add_option("--tau-a", probe_o.tau_a, "half-window for zeta");
    probe->add_option("--zeta-mode", probe_o.zeta_mode, "quadrature or asymptotic")
        ->check(CLI::IsMember({"quadrature", "asymptotic"}));
    probe->add_option("--out", probe_o.out, "output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return ExitCode::usage;
    }

    try {
        if (*probe) return detail::run_probe(probe_o, out);
        if (*sim) {
            analysis::SweepConfig base;
            base.methods = {Method::ode};
            return detail::run_simulate_or_compare(detail::build_config(sim, sim_o, base), true, out);
        }
        if (*cmp) return detail::run_simulate_or_compare(detail::build_config(cmp, cmp_o, {}), false, out);
        analysis::SweepConfig base;
        base.delta_values = analysis::linspace(0.05, 2.0, 40);
        base.tau_grid = {-10.0, 10.0, 201};
        return detail::run_sweep(detail::build_config(swp, swp_o, base), out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::usage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::io;
    } catch (const IntegrationError& e) {
        detail::diagnostic(err, "integration_failure", e.what(), {{"tau", e.tau()}});
        return ExitCode::numerical;
    } catch (const ConvergenceError& e) {
        detail::diagnostic(err, "convergence_failure", e.what());
        return ExitCode::numerical;
    } catch (const OverflowError& e) {
        detail::diagnostic(err, "overflow", e.what());
        return ExitCode::numerical;
    } catch (const DomainError& e) {
        detail::diagnostic(err, "domain_error", e.what());
        return ExitCode::numerical;
    }
}

}  // namespace lzsm::cli
