// Command-line driver for the blow-up certification pipeline.
//
// Subcommands map onto pipeline stages (see include/inwave/scenario.hpp):
//   verify-identities   algebraic identity gate only
//   check-hypotheses    derived constants + initial-data screening
//   make-ic             write the generated initial data and stop
//   simulate            run the solver, store field snapshots
//   omega               add the trusted-region construction
//   trace               full run, print the characteristic path summaries
//   certify             full run: invariant scan + blow-up gates (default)
//   convergence         certify at the configured and a refined resolution
//
// Exit codes: 0 all requested checks passed, 1 a mathematical gate failed,
// 2 infrastructure error (bad config file, I/O failure, solver breakdown).

#include <CLI11.hpp>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "inwave/scenario_io.hpp"

namespace {

using namespace inwave;

struct cli_options {
    std::string config_path;
    std::string out_dir = "out";
    long long seed_override = -1;
    int verbosity = 1;  // 0 quiet, 1 gate lines, 2 full report
    bool no_outputs = false;
};

// per-run overrides for `simulate` (values < 0 / NaN mean "keep the config")
struct run_overrides {
    long long n = -1;
    double cfl = -1;
    double t_end = std::numeric_limits<double>::quiet_NaN();
    double pad = -1;
    double stride = -1;
    double trigger = -1;
};

struct trace_options {
    int family = 1;
    std::vector<double> starts;  // empty: use the standard study paths
    double t_stop = -1;          // < 0: full stored horizon
};

void say(const cli_options& opt, int level, const char* fmt, ...)
    __attribute__((format(printf, 3, 4)));

void say(const cli_options& opt, int level, const char* fmt, ...) {
    if (opt.verbosity < level) return;
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stdout, fmt, args);
    va_end(args);
    std::fputc('\n', stdout);
}

scenario_config load(const cli_options& opt) {
    scenario_config cfg = load_config(opt.config_path);
    if (opt.seed_override >= 0) cfg.seed = uint64_t(opt.seed_override);
    return cfg;
}

void apply(const run_overrides& ov, scenario_config& cfg) {
    if (ov.n > 0) cfg.solver.n = int(ov.n);
    if (ov.cfl > 0) cfg.solver.cfl = ov.cfl;
    if (!std::isnan(ov.t_end)) cfg.solver.t_end = ov.t_end;
    if (ov.pad >= 0) cfg.initial.options.pad = ov.pad;
    if (ov.stride > 0) cfg.solver.dt_store = ov.stride;
    if (ov.trigger > 0) cfg.solver.trigger_ceiling = ov.trigger;
    validate_config(cfg);
}

const char* mark(bool ok) { return ok ? "[PASS]" : "[FAIL]"; }

void print_gates(const cli_options& opt, const certification_report& rep) {
    say(opt, 1, "%s identities      max residual %.3e over %zu checks",
        mark(rep.identities.pass),
        [&] {
            double worst = 0;
            for (const auto& c : rep.identities.checks)
                worst = std::max(worst, c.max_residual);
            return worst;
        }(),
        rep.identities.checks.size());
    if (rep.gate_failed == "hypotheses") {
        say(opt, 1, "[FAIL] hypotheses      rejected: %s", rep.gate_message.c_str());
        return;
    }
    if (rep.stage_reached == "identities") return;

    const hypothesis_set& hs = rep.constants_pre;
    say(opt, 1, "[PASS] hypotheses      N = %g  window = %g  T_tilde = %g", hs.N,
        hs.blowup_window, hs.T_tilde);
    if (rep.gate_failed == "generate") {
        say(opt, 1, "[FAIL] initial data    rejected: %s", rep.gate_message.c_str());
        return;
    }
    if (rep.stage_reached == "hypotheses") return;

    say(opt, 1, "%s initial data    screening %s", mark(rep.data_checks.pass()),
        rep.hypotheses_enforced ? "enforced" : "informational");
    if (rep.stage_reached == "generate") return;

    say(opt, 1, "[....] simulate        %s at t = %g (steps %d, max gradient %g)",
        rep.sim.reason.c_str(), rep.sim.t_stop, rep.sim.steps,
        rep.sim.max_gradient_at_stop);
    if (rep.stage_reached == "simulate") return;

    say(opt, 1, "[....] omega           certified to t = %g (t_m %s %g)",
        rep.omega.T_region, rep.omega.t_m_source.c_str(), rep.omega.t_m);
    if (rep.stage_reached == "omega") return;

    say(opt, 1, "%s invariant scan  %ld points to t = %g", mark(rep.lemma.pass),
        rep.lemma.points, rep.lemma.t_certified);
    if (opt.verbosity >= 2)
        for (const auto& row : rep.lemma.rows)
            say(opt, 2, "       %-12s margin %+.6f  floor %+.6f  %s",
                row.name.c_str(), row.margin, row.floor, mark(row.satisfied));
    say(opt, 1,
        "%s blow-up gates   seed %.6g  trigger %.6g <= window %.6g + dt; bound "
        "margin %.2e over %d points",
        mark(rep.theorem.pass), rep.theorem.beta0_star, rep.theorem.trigger_time,
        rep.theorem.window, rep.theorem.min_rel_margin, rep.theorem.compared);
}

int finish(const cli_options& opt, const scenario_result& res) {
    print_gates(opt, res.report);
    if (!opt.no_outputs) {
        emit_outputs(res, opt.out_dir);
        say(opt, 1, "outputs: %s (config %s)", opt.out_dir.c_str(),
            config_hash(res.config).c_str());
    }
    if (opt.verbosity >= 2)
        std::fprintf(stdout, "%s\n", to_json(res.report).dump(2).c_str());
    if (!res.report.pass)
        say(opt, 1, "FAIL: gate '%s' (%s)", res.report.gate_failed.c_str(),
            res.report.gate_message.c_str());
    return res.report.pass ? 0 : 1;
}

int run_stage(const cli_options& opt, scenario_stage stage) {
    return finish(opt, run_scenario(load(opt), stage));
}

int cmd_trace(const cli_options& opt, const trace_options& tr) {
    scenario_result res = run_scenario(load(opt));
    if (!tr.starts.empty()) {
        if (!res.field) {
            std::fprintf(stderr, "inwave: trace: the run stored no field data\n");
            return 2;
        }
        const space_time_field& F = *res.field;
        double t_stop = tr.t_stop < 0 ? F.t_back() : tr.t_stop;
        if (t_stop > F.t_back())
            throw input_error("trace: --t-stop exceeds the stored data horizon");
        trace_controls tc;
        tc.rel_tol = res.config.diag.rel_tol;
        tc.record_dt = t_stop / 256;
        res.paths.clear();
        for (double r : tr.starts)
            res.paths.push_back(
                trace_path(F, res.config.gas, tr.family, r, 0.0, t_stop, tc));
    }
    for (const auto& p : res.paths) {
        const auto& q = p.pts;
        say(opt, 1,
            "path family %d from r = %-9g  %3zu samples  t <= %-10g  weighted "
            "gradient %g -> %g",
            p.family, p.r_start, q.size(), q.empty() ? 0.0 : q.back().t,
            q.empty() ? 0.0 : q.front().beta_t, q.empty() ? 0.0 : q.back().beta_t);
    }
    if (res.paths.empty()) say(opt, 1, "no characteristic paths were produced");
    return finish(opt, res);
}

int cmd_convergence(const cli_options& opt) {
    const scenario_config base = load(opt);
    scenario_config fine = base;
    fine.solver.n = base.solver.n * base.diag.coarsen;
    fine.label = base.label + "-refined";

    say(opt, 1, "level n = %d", base.solver.n);
    const scenario_result lo = run_scenario(base);
    print_gates(opt, lo.report);
    say(opt, 1, "level n = %d", fine.solver.n);
    const scenario_result hi = run_scenario(fine);
    print_gates(opt, hi.report);

    const convergence_appendix& a = lo.report.convergence;
    const convergence_appendix& b = hi.report.convergence;
    say(opt, 1, "transport-law residual, max over %zu paths:",
        b.path_residuals.size());
    say(opt, 1, "  n %5d/%5d  residual %.3e  order %.2f", a.n_coarse, a.n_fine,
        a.max_fine_residual, a.order_of_max);
    say(opt, 1, "  n %5d/%5d  residual %.3e  order %.2f", b.n_coarse, b.n_fine,
        b.max_fine_residual, b.order_of_max);
    say(opt, 1, "seed gradient: %.8g -> %.8g   trigger time: %.6g -> %.6g",
        lo.report.theorem.beta0_star, hi.report.theorem.beta0_star,
        lo.report.theorem.trigger_time, hi.report.theorem.trigger_time);

    if (!opt.no_outputs) {
        emit_outputs(hi, opt.out_dir);
        say(opt, 1, "outputs: %s (refined run, config %s)", opt.out_dir.c_str(),
            config_hash(fine).c_str());
    }
    return lo.report.pass && hi.report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial inward-wave blow-up certification pipeline"};
    app.require_subcommand(1);

    cli_options opt;
    app.add_option("-c,--config", opt.config_path, "scenario config (JSON)")
        ->required();
    app.add_option("-o,--out-dir", opt.out_dir, "output directory");
    app.add_option("--seed", opt.seed_override, "override the config seed");
    app.add_flag_function("-v,--verbose", [&](int64_t n) { opt.verbosity = 1 + int(n); },
                          "print the full report");
    app.add_flag_function("-q,--quiet", [&](int64_t) { opt.verbosity = 0; },
                          "exit code only");
    app.add_flag("--no-outputs", opt.no_outputs, "skip writing artifact files");

    struct sub {
        const char* name;
        const char* help;
        scenario_stage stage;
    };
    const sub stage_subs[] = {
        {"verify-identities", "run the algebraic identity gate",
         scenario_stage::identities},
        {"check-hypotheses", "derive constants and screen the initial data",
         scenario_stage::generate},
        {"make-ic", "generate and write the initial data", scenario_stage::generate},
        {"simulate", "run the solver and store field snapshots",
         scenario_stage::simulate},
        {"omega", "construct the trusted space-time region", scenario_stage::omega},
        {"certify", "full pipeline: invariant scan and blow-up gates",
         scenario_stage::certify},
    };
    run_overrides ov;
    trace_options tr;
    for (const auto& s : stage_subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        if (std::string(s.name) == "simulate") {
            sub->add_option("--n", ov.n, "grid size override");
            sub->add_option("--cfl", ov.cfl, "CFL number override");
            sub->add_option("--t-end", ov.t_end, "time horizon override");
            sub->add_option("--pad", ov.pad, "steady-extension pad override");
            sub->add_option("--stride", ov.stride, "snapshot storage stride override");
            sub->add_option("--trigger", ov.trigger, "gradient trigger ceiling override");
        }
    }
    CLI::App* trace_sub = app.add_subcommand(
        "trace", "full pipeline, print characteristic path summaries");
    trace_sub->add_option("--family", tr.family, "characteristic family (1 or 2)")
        ->check(CLI::Range(1, 2));
    trace_sub->add_option("--start", tr.starts,
                          "starting radius at t = 0 (repeatable)");
    trace_sub->add_option("--t-stop", tr.t_stop,
                          "trace horizon (default: stored data horizon)");
    app.add_subcommand("convergence", "certify at two resolutions and compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help is 0; bad arguments are infrastructure
    }

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "trace") return cmd_trace(opt, tr);
        if (cmd == "convergence") return cmd_convergence(opt);
        if (cmd == "simulate") {
            scenario_config cfg = load(opt);
            apply(ov, cfg);
            return finish(opt, run_scenario(cfg, scenario_stage::simulate));
        }
        for (const auto& s : stage_subs)
            if (cmd == s.name) return run_stage(opt, s.stage);
        std::fprintf(stderr, "inwave: unknown subcommand '%s'\n", cmd.c_str());
        return 2;
    } catch (const error& e) {
        std::fprintf(stderr, "inwave: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "inwave: %s\n", e.what());
        return 2;
    }
}
