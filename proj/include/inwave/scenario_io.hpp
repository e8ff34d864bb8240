#pragma once

// Serialization for the pipeline: config files (strict-keyed JSON that
// round-trips bit-exactly), the machine-readable report, CSV data products,
// and the field loader that lets a stored run be re-certified without
// re-simulating.  All numbers are written as shortest round-trip decimals,
// so rerunning with the same config and seed reproduces files byte for byte.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inwave/errors.hpp"
#include "inwave/scenario.hpp"

namespace inwave {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting and hashing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw io_error("could not parse number '" + std::string(s) + "'");
    return v;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

/// Emits key only when the value is not the "unset" sentinel.
inline void put_opt(ordered_json& j, const char* key, double v) {
    if (std::isfinite(v)) j[key] = v;
}

inline void check_keys(const ordered_json& j, const char* block,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw input_error(std::string("config: '") + block + "' must be an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || item.key() == k;
        if (!ok)
            throw input_error(std::string("config: unknown key '") + item.key() +
                              "' in '" + block + "'");
    }
}

template <class T>
void get_to(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Config serialization
// ---------------------------------------------------------------------------

inline ordered_json to_json(const scenario_config& c) {
    ordered_json j;
    j["label"] = c.label;
    j["seed"] = c.seed;
    j["gas"] = {{"gamma", c.gas.gamma}, {"K", c.gas.K}, {"m", c.gas.m}};
    {
        ordered_json b;
        b["r0"] = c.bands.r0;
        b["r1"] = c.bands.r1;
        b["r2"] = c.bands.r2;
        b["r_star"] = c.bands.r_star;
        b["h_lo"] = c.bands.h_lo;
        b["h_hi"] = c.bands.h_hi;
        b["u_lo_mag"] = c.bands.u_lo_mag;
        b["u_hi_mag"] = c.bands.u_hi_mag;
        b["alpha_lo"] = c.bands.alpha_lo;
        b["alpha_hi"] = c.bands.alpha_hi;
        b["beta_bar"] = c.bands.beta_bar;
        j["bands"] = std::move(b);
    }
    detail::put_opt(j, "t_cap", c.t_cap);
    {
        ordered_json ini;
        ini["type"] = c.initial.type;
        ordered_json bump;
        detail::put_opt(bump, "center", c.initial.bump.center);
        bump["width"] = c.initial.bump.width;
        bump["order"] = c.initial.bump.order;
        detail::put_opt(bump, "target", c.initial.bump.target);
        ini["bump"] = std::move(bump);
        ordered_json gen;
        detail::put_opt(gen, "alpha_level", c.initial.options.alpha_level);
        detail::put_opt(gen, "beta_level", c.initial.options.beta_level);
        detail::put_opt(gen, "h_anchor", c.initial.options.h_anchor);
        detail::put_opt(gen, "u_anchor", c.initial.options.u_anchor);
        detail::put_opt(gen, "taper_width", c.initial.options.taper_width);
        gen["pad"] = c.initial.options.pad;
        gen["max_grid_points"] = c.initial.options.max_grid_points;
        gen["min_cells_per_width"] = c.initial.options.min_cells_per_width;
        ini["generator"] = std::move(gen);
        j["initial"] = std::move(ini);
    }
    {
        ordered_json s;
        s["n"] = c.solver.n;
        s["cfl"] = c.solver.cfl;
        detail::put_opt(s, "t_end", c.solver.t_end);
        s["dt_store"] = c.solver.dt_store;
        s["trigger_ceiling"] = c.solver.trigger_ceiling;
        s["pin_inflow_nodes"] = c.solver.pin_inflow_nodes;
        j["solver"] = std::move(s);
    }
    {
        ordered_json d;
        d["path_count"] = c.diag.path_count;
        d["rel_tol"] = c.diag.rel_tol;
        d["record_dt"] = c.diag.record_dt;
        d["identity_samples"] = c.diag.identity_samples;
        d["identity_tol"] = c.diag.identity_tol;
        d["theorem_rtol"] = c.diag.theorem_rtol;
        d["resolution_factor"] = c.diag.resolution_factor;
        d["check_samples"] = c.diag.check_samples;
        d["coarsen"] = c.diag.coarsen;
        j["diagnostics"] = std::move(d);
    }
    return j;
}

inline scenario_config config_from_json(const ordered_json& j) {
    detail::check_keys(j, "config",
                       {"label", "seed", "gas", "bands", "t_cap", "initial", "solver",
                        "diagnostics"});
    scenario_config c;
    detail::get_to(j, "label", c.label);
    detail::get_to(j, "seed", c.seed);

    if (!j.contains("gas") || !j.contains("bands"))
        throw input_error("config: 'gas' and 'bands' are required");
    const auto& g = j.at("gas");
    detail::check_keys(g, "gas", {"gamma", "K", "m"});
    g.at("gamma").get_to(c.gas.gamma);
    g.at("K").get_to(c.gas.K);
    g.at("m").get_to(c.gas.m);

    const auto& b = j.at("bands");
    detail::check_keys(b, "bands",
                       {"r0", "r1", "r2", "r_star", "h_lo", "h_hi", "u_lo_mag",
                        "u_hi_mag", "alpha_lo", "alpha_hi", "beta_bar"});
    b.at("r0").get_to(c.bands.r0);
    b.at("r1").get_to(c.bands.r1);
    b.at("r2").get_to(c.bands.r2);
    b.at("r_star").get_to(c.bands.r_star);
    b.at("h_lo").get_to(c.bands.h_lo);
    b.at("h_hi").get_to(c.bands.h_hi);
    b.at("u_lo_mag").get_to(c.bands.u_lo_mag);
    b.at("u_hi_mag").get_to(c.bands.u_hi_mag);
    b.at("alpha_lo").get_to(c.bands.alpha_lo);
    b.at("alpha_hi").get_to(c.bands.alpha_hi);
    b.at("beta_bar").get_to(c.bands.beta_bar);

    detail::get_to(j, "t_cap", c.t_cap);

    if (j.contains("initial")) {
        const auto& ini = j.at("initial");
        detail::check_keys(ini, "initial", {"type", "bump", "generator"});
        detail::get_to(ini, "type", c.initial.type);
        if (ini.contains("bump")) {
            const auto& bump = ini.at("bump");
            detail::check_keys(bump, "initial.bump", {"center", "width", "order", "target"});
            detail::get_to(bump, "center", c.initial.bump.center);
            detail::get_to(bump, "width", c.initial.bump.width);
            detail::get_to(bump, "order", c.initial.bump.order);
            detail::get_to(bump, "target", c.initial.bump.target);
        }
        if (ini.contains("generator")) {
            const auto& gen = ini.at("generator");
            detail::check_keys(gen, "initial.generator",
                               {"alpha_level", "beta_level", "h_anchor", "u_anchor",
                                "taper_width", "pad", "max_grid_points",
                                "min_cells_per_width"});
            detail::get_to(gen, "alpha_level", c.initial.options.alpha_level);
            detail::get_to(gen, "beta_level", c.initial.options.beta_level);
            detail::get_to(gen, "h_anchor", c.initial.options.h_anchor);
            detail::get_to(gen, "u_anchor", c.initial.options.u_anchor);
            detail::get_to(gen, "taper_width", c.initial.options.taper_width);
            detail::get_to(gen, "pad", c.initial.options.pad);
            detail::get_to(gen, "max_grid_points", c.initial.options.max_grid_points);
            detail::get_to(gen, "min_cells_per_width",
                           c.initial.options.min_cells_per_width);
        }
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        detail::check_keys(s, "solver",
                           {"n", "cfl", "t_end", "dt_store", "trigger_ceiling",
                            "pin_inflow_nodes"});
        detail::get_to(s, "n", c.solver.n);
        detail::get_to(s, "cfl", c.solver.cfl);
        detail::get_to(s, "t_end", c.solver.t_end);
        detail::get_to(s, "dt_store", c.solver.dt_store);
        detail::get_to(s, "trigger_ceiling", c.solver.trigger_ceiling);
        detail::get_to(s, "pin_inflow_nodes", c.solver.pin_inflow_nodes);
    }
    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        detail::check_keys(d, "diagnostics",
                           {"path_count", "rel_tol", "record_dt", "identity_samples",
                            "identity_tol", "theorem_rtol", "resolution_factor",
                            "check_samples", "coarsen"});
        detail::get_to(d, "path_count", c.diag.path_count);
        detail::get_to(d, "rel_tol", c.diag.rel_tol);
        detail::get_to(d, "record_dt", c.diag.record_dt);
        detail::get_to(d, "identity_samples", c.diag.identity_samples);
        detail::get_to(d, "identity_tol", c.diag.identity_tol);
        detail::get_to(d, "theorem_rtol", c.diag.theorem_rtol);
        detail::get_to(d, "resolution_factor", c.diag.resolution_factor);
        detail::get_to(d, "check_samples", c.diag.check_samples);
        detail::get_to(d, "coarsen", c.diag.coarsen);
    }
    return c;
}

inline std::string config_text(const scenario_config& c) { return to_json(c).dump(2) + "\n"; }

inline std::string config_hash(const scenario_config& c) {
    return detail::hex64(detail::fnv1a64(to_json(c).dump()));
}

inline scenario_config parse_config(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("config: invalid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline scenario_config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline void save_config(const scenario_config& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write config file " + path.string());
    out << config_text(c);
    if (!out) throw io_error("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

namespace detail {

inline ordered_json constants_json(const hypothesis_set& hs) {
    ordered_json j;
    j["alpha_star_lo"] = hs.alpha_star_lo;
    j["alpha_star_hi"] = hs.alpha_star_hi;
    j["beta_bar_floor"] = hs.beta_bar_floor;
    j["T_tilde"] = hs.T_tilde;
    j["T"] = hs.T;
    j["T_binding"] = hs.T_binding;
    j["N"] = hs.N;
    j["N_binding"] = hs.N_binding;
    j["blowup_window"] = hs.blowup_window;
    return j;
}

inline ordered_json checks_json(const check_report& rep) {
    ordered_json j;
    j["pass"] = rep.pass();
    ordered_json recs = ordered_json::array();
    for (const auto& r : rep.records)
        recs.push_back({{"condition", r.condition},
                        {"satisfied", r.satisfied},
                        {"margin", r.margin},
                        {"worst_r", r.worst_r}});
    j["records"] = std::move(recs);
    return j;
}

}  // namespace detail

inline ordered_json to_json(const certification_report& rep) {
    ordered_json j;
    j["label"] = rep.label;
    j["config_hash"] = rep.config_hash;
    j["pass"] = rep.pass;
    j["stage_reached"] = rep.stage_reached;
    j["gate_failed"] = rep.gate_failed;
    j["gate_message"] = rep.gate_message;

    {
        ordered_json g;
        g["pass"] = rep.identities.pass;
        ordered_json checks = ordered_json::array();
        for (const auto& c : rep.identities.checks)
            checks.push_back({{"id", c.id},
                              {"samples", c.samples},
                              {"max_residual", c.max_residual},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass},
                              {"worst",
                               {{"gamma", c.worst_gamma},
                                {"m", c.worst_m},
                                {"r", c.worst_r},
                                {"u", c.worst_u},
                                {"h", c.worst_h}}}});
        g["checks"] = std::move(checks);
        j["identities"] = std::move(g);
    }
    j["constants_pre"] = detail::constants_json(rep.constants_pre);
    j["data_checks"] = detail::checks_json(rep.data_checks);
    j["hypotheses_enforced"] = rep.hypotheses_enforced;
    {
        ordered_json s;
        s["reason"] = rep.sim.reason;
        s["t_stop"] = rep.sim.t_stop;
        s["steps"] = rep.sim.steps;
        s["max_gradient_at_stop"] = rep.sim.max_gradient_at_stop;
        s["trigger_ceiling"] = rep.sim.trigger_ceiling;
        s["initial_max_gradient"] = rep.sim.initial_max_gradient;
        s["n"] = rep.sim.n;
        s["r_min"] = rep.sim.r_min;
        s["r_max"] = rep.sim.r_max;
        s["dr"] = rep.sim.dr;
        s["dt_store"] = rep.sim.dt_store;
        s["t_end"] = rep.sim.t_end;
        j["sim"] = std::move(s);
    }
    {
        ordered_json o;
        o["T_tilde"] = rep.omega.T_tilde;
        o["t_m_observed"] = rep.omega.t_m_observed;
        o["t_m"] = rep.omega.t_m;
        o["t_m_source"] = rep.omega.t_m_source;
        o["t_data"] = rep.omega.t_data;
        o["T_region"] = rep.omega.T_region;
        o["binding"] = rep.omega.binding;
        o["truncated"] = rep.omega.truncated;
        o["gap_at_end"] = rep.omega.gap_at_end;
        j["omega"] = std::move(o);
    }
    j["constants_final"] = detail::constants_json(rep.constants_final);
    {
        ordered_json l;
        l["pass"] = rep.lemma.pass;
        l["t_certified"] = rep.lemma.t_certified;
        l["points"] = rep.lemma.points;
        ordered_json rows = ordered_json::array();
        for (const auto& r : rep.lemma.rows)
            rows.push_back({{"name", r.name},
                            {"min_value", r.min_value},
                            {"max_value", r.max_value},
                            {"margin", r.margin},
                            {"worst_r", r.worst_r},
                            {"worst_t", r.worst_t},
                            {"floor", r.floor},
                            {"satisfied", r.satisfied}});
        l["rows"] = std::move(rows);
        j["lemma"] = std::move(l);
    }
    {
        const theorem_gate& t = rep.theorem;
        ordered_json g;
        g["pass"] = t.pass;
        g["beta0_star"] = t.beta0_star;
        g["N"] = t.N;
        g["window"] = t.window;
        g["T"] = t.T;
        g["seed_below_rate"] = t.seed_below_rate;
        g["window_within_T"] = t.window_within_T;
        g["trigger_time"] = t.trigger_time;
        g["trigger_slack"] = t.trigger_slack;
        g["trigger_within_window"] = t.trigger_within_window;
        g["t_b"] = t.t_b;
        g["t_resolution"] = t.t_resolution;
        g["resolution_ceiling"] = t.resolution_ceiling;
        g["compared"] = t.compared;
        g["min_rel_margin"] = t.min_rel_margin;
        g["rel_tol"] = t.rel_tol;
        g["bound_dominated"] = t.bound_dominated;
        j["theorem"] = std::move(g);
    }
    {
        const convergence_appendix& c = rep.convergence;
        ordered_json g;
        g["available"] = c.available;
        if (c.available) {
            g["n_coarse"] = c.n_coarse;
            g["n_fine"] = c.n_fine;
            ordered_json rows = ordered_json::array();
            for (const auto& e : c.path_residuals)
                rows.push_back({{"name", e.name},
                                {"coarse", e.coarse},
                                {"fine", e.fine},
                                {"order", e.order}});
            g["path_residuals"] = std::move(rows);
            g["min_path_order"] = c.min_path_order;
            g["max_coarse_residual"] = c.max_coarse_residual;
            g["max_fine_residual"] = c.max_fine_residual;
            g["order_of_max"] = c.order_of_max;
            ordered_json margins = ordered_json::array();
            for (const auto& e : c.lemma_margins)
                margins.push_back(
                    {{"name", e.name}, {"coarse", e.coarse}, {"fine", e.fine}});
            g["lemma_margins"] = std::move(margins);
        }
        j["convergence"] = std::move(g);
    }
    return j;
}

// ---------------------------------------------------------------------------
// CSV products
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot write " + p.string());
    return out;
}

inline std::string sim_line(const sim_block& s) {
    std::string line = "# sim reason=" + s.reason;
    line += " t_stop=" + fmt(s.t_stop);
    line += " steps=" + std::to_string(s.steps);
    line += " max_gradient_at_stop=" + fmt(s.max_gradient_at_stop);
    line += " trigger_ceiling=" + fmt(s.trigger_ceiling);
    line += " initial_max_gradient=" + fmt(s.initial_max_gradient);
    line += " n=" + std::to_string(s.n);
    line += " r_min=" + fmt(s.r_min);
    line += " r_max=" + fmt(s.r_max);
    line += " dr=" + fmt(s.dr);
    line += " dt_store=" + fmt(s.dt_store);
    line += " t_end=" + fmt(s.t_end);
    return line;
}

inline sim_block parse_sim_line(const std::string& line) {
    if (line.rfind("# sim ", 0) != 0)
        throw io_error("field file: missing '# sim' header line");
    sim_block s;
    std::istringstream ss(line.substr(6));
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw io_error("field file: malformed sim header token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "reason") s.reason = val;
        else if (key == "t_stop") s.t_stop = parse_double(val);
        else if (key == "steps") s.steps = int(parse_double(val));
        else if (key == "max_gradient_at_stop") s.max_gradient_at_stop = parse_double(val);
        else if (key == "trigger_ceiling") s.trigger_ceiling = parse_double(val);
        else if (key == "initial_max_gradient") s.initial_max_gradient = parse_double(val);
        else if (key == "n") s.n = int(parse_double(val));
        else if (key == "r_min") s.r_min = parse_double(val);
        else if (key == "r_max") s.r_max = parse_double(val);
        else if (key == "dr") s.dr = parse_double(val);
        else if (key == "dt_store") s.dt_store = parse_double(val);
        else if (key == "t_end") s.t_end = parse_double(val);
        else throw io_error("field file: unknown sim header key '" + key + "'");
    }
    return s;
}

inline void write_field_csv(const std::filesystem::path& p, const space_time_field& F,
                            const sim_block& sim, const gas_params& gas,
                            const std::string& hash) {
    auto out = open_out(p);
    out << "# config " << hash << "\n" << sim_line(sim) << "\n";
    out << "t,r,h,u,rho\n";
    const grid& g = F.geometry();
    for (const auto& s : F.snapshots()) {
        const std::string ts = fmt(s.t);
        for (int i = 0; i < g.n; ++i)
            out << ts << ',' << fmt(g.r(i)) << ',' << fmt(s.h[i]) << ',' << fmt(s.u[i])
                << ',' << fmt(density_from_sound_speed(s.h[i], gas)) << "\n";
    }
    if (!out) throw io_error("failed writing " + p.string());
}

}  // namespace detail

/// Writes every data product of a finished (possibly failed) run.
inline void emit_outputs(const scenario_result& res, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string());

    const std::string hash = config_hash(res.config);
    save_config(res.config, dir / "config.json");

    {
        certification_report stamped = res.report;
        stamped.config_hash = hash;
        auto out = detail::open_out(dir / "report.json");
        out << to_json(stamped).dump(2) << "\n";
        if (!out) throw io_error("failed writing report.json");
    }

    if (res.field)
        detail::write_field_csv(dir / "field.csv", *res.field, res.report.sim,
                                res.config.gas, hash);
    if (res.field_coarse)
        detail::write_field_csv(dir / "field_coarse.csv", *res.field_coarse,
                                res.sim_coarse, res.config.gas, hash);

    if (res.has_ic) {
        auto out = detail::open_out(dir / "ic.csv");
        out << "# config " << hash << "\n";
        out << "r,h,u,h_r,u_r,alpha_t,beta_t\n";
        const grid g = res.field
                           ? res.field->geometry()
                           : make_grid(res.ic.r_lo, res.ic.r_hi, res.config.solver.n);
        for (int i = 0; i < g.n; ++i) {
            const double r = g.r(i);
            const double h = res.ic.h0.value(r), u = res.ic.u0.value(r);
            const double h_r = res.ic.h0.deriv(r), u_r = res.ic.u0.deriv(r);
            const auto gs =
                make_gradient_state(point_state{r, h, u}, u_r, h_r, res.config.gas);
            out << detail::fmt(r) << ',' << detail::fmt(h) << ',' << detail::fmt(u)
                << ',' << detail::fmt(h_r) << ',' << detail::fmt(u_r) << ','
                << detail::fmt(gs.alpha_t) << ',' << detail::fmt(gs.beta_t) << "\n";
        }
    }

    if (res.omega) {
        auto out = detail::open_out(dir / "omega.csv");
        out << "# config " << hash << "\n";
        out << "t,r_left,r_right\n";
        const auto& L = res.omega->left.pts;
        const auto& R = res.omega->right.pts;
        const size_t count = std::min(L.size(), R.size());
        for (size_t k = 0; k < count; ++k)
            out << detail::fmt(L[k].t) << ',' << detail::fmt(L[k].r) << ','
                << detail::fmt(R[k].r) << "\n";
    }

    if (!res.paths.empty()) {
        auto out = detail::open_out(dir / "paths.csv");
        out << "# config " << hash << "\n";
        out << "path_id,family,t,r,h,u,c1,c2,w,z,alpha,beta,alpha_t,beta_t\n";
        for (size_t id = 0; id < res.paths.size(); ++id)
            for (const auto& q : res.paths[id].pts)
                out << id << ',' << res.paths[id].family << ',' << detail::fmt(q.t)
                    << ',' << detail::fmt(q.r) << ',' << detail::fmt(q.h) << ','
                    << detail::fmt(q.u) << ',' << detail::fmt(q.c1) << ','
                    << detail::fmt(q.c2) << ',' << detail::fmt(q.w) << ','
                    << detail::fmt(q.z) << ',' << detail::fmt(q.alpha) << ','
                    << detail::fmt(q.beta) << ',' << detail::fmt(q.alpha_t) << ','
                    << detail::fmt(q.beta_t) << "\n";
    }

    if (!res.bound_t.empty()) {
        auto out = detail::open_out(dir / "bound_vs_observed.csv");
        out << "# config " << hash << "\n";
        out << "t,bound,observed,margin\n";
        for (size_t k = 0; k < res.bound_t.size(); ++k)
            out << detail::fmt(res.bound_t[k]) << ',' << detail::fmt(res.bound_value[k])
                << ',' << detail::fmt(res.observed_value[k]) << ','
                << detail::fmt(res.observed_value[k] - res.bound_value[k]) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Field reload and replay
// ---------------------------------------------------------------------------

/// Reads a field CSV back into a sampleable store.  Time derivatives are
/// recomputed with the solver's own right side, which reproduces the stored
/// values exactly; the config hash in the header must match.
inline std::pair<space_time_field, sim_block> load_field_csv(
    const std::filesystem::path& p, const gas_params& gas, const std::string& hash) {
    std::ifstream in(p);
    if (!in) throw io_error("cannot open field file " + p.string());
    std::string line;
    if (!std::getline(in, line) || line != "# config " + hash)
        throw input_error("field file " + p.string() +
                          ": config hash does not match this config");
    if (!std::getline(in, line)) throw io_error("field file: truncated header");
    const sim_block sim = detail::parse_sim_line(line);
    if (!std::getline(in, line) || line != "t,r,h,u,rho")
        throw io_error("field file: unexpected column header");

    struct raw_snap {
        double t;
        std::vector<double> r, h, u;
    };
    std::vector<raw_snap> snaps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double vals[5];
        size_t pos = 0;
        for (int k = 0; k < 5; ++k) {
            const size_t next = k < 4 ? line.find(',', pos) : line.size();
            if (next == std::string::npos) throw io_error("field file: short row");
            vals[k] = detail::parse_double(
                std::string_view(line).substr(pos, next - pos));
            pos = next + 1;
        }
        if (snaps.empty() || vals[0] != snaps.back().t) snaps.push_back({vals[0], {}, {}, {}});
        snaps.back().r.push_back(vals[1]);
        snaps.back().h.push_back(vals[2]);
        snaps.back().u.push_back(vals[3]);
    }
    if (snaps.empty()) throw io_error("field file: no data rows");
    // the header carries the exact grid bounds; the r column must agree after
    // the shortest-round-trip decimals are read back
    const grid g = make_grid(sim.r_min, sim.r_max, sim.n);
    const auto& r0 = snaps.front().r;
    if (int(r0.size()) != g.n) throw io_error("field file: wrong node count");
    for (int i = 0; i < g.n; ++i)
        if (r0[i] != g.r(i))
            throw io_error("field file: node coordinates do not match the header grid");

    space_time_field F(g);
    for (auto& s : snaps) {
        if (int(s.r.size()) != g.n)
            throw io_error("field file: snapshot at t = " + detail::fmt(s.t) +
                           " has wrong node count");
        field_snapshot snap;
        snap.t = s.t;
        snap.h = std::move(s.h);
        snap.u = std::move(s.u);
        rhs_eval(g, snap.h, snap.u, gas, snap.h_t, snap.u_t);
        F.push(std::move(snap));
    }
    return {std::move(F), sim};
}

/// Re-runs certification from stored field files; no simulation happens.
inline scenario_result replay_scenario(const scenario_config& cfg,
                                       const std::filesystem::path& dir,
                                       scenario_stage stop_after = scenario_stage::certify) {
    const std::string hash = config_hash(cfg);
    auto fine = load_field_csv(dir / "field.csv", cfg.gas, hash);
    replay_fields rf{std::move(fine.first), fine.second, std::nullopt, {}};
    const auto coarse_path = dir / "field_coarse.csv";
    if (std::filesystem::exists(coarse_path)) {
        auto coarse = load_field_csv(coarse_path, cfg.gas, hash);
        rf.coarse = std::move(coarse.first);
        rf.coarse_sim = coarse.second;
    }
    return run_scenario(cfg, stop_after, &rf);
}

}  // namespace inwave
