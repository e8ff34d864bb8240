#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "inwave/characteristics.hpp"
#include "inwave/solver.hpp"
#include "inwave/stationary.hpp"
#include "testutil.hpp"

using namespace inwave;

namespace {

/// Interpolation substrate with (h, u) constant in r and t. Not a solution of
/// the dynamics (the geometric source is nonzero), so it is used only for
/// path-geometry checks where the speeds are exact.
space_time_field uniform_field(const grid& g, double h0, double u0) {
    space_time_field F(g);
    for (double t : {0.0, 0.15, 0.3}) {
        field_snapshot s;
        s.t = t;
        s.h.assign(size_t(g.n), h0);
        s.u.assign(size_t(g.n), u0);
        s.h_t.assign(size_t(g.n), 0.0);
        s.u_t.assign(size_t(g.n), 0.0);
        F.push(std::move(s));
    }
    return F;
}

solve_result run_smooth_flow(const gas_params& p, int n, double t_end) {
    const grid g = make_grid(10.0, 11.0, n);
    const auto ic = build_initial_field(
        g,
        {[](double r) { return 1.0 + 0.1 * std::exp(-std::pow((r - 10.5) / 0.1, 2)); },
         [](double r) {
             const double x = (r - 10.5) / 0.1;
             return 0.1 * std::exp(-x * x) * (-2 * x / 0.1);
         }},
        {[](double r) { return -3.0 + 0.15 * std::exp(-std::pow((r - 10.55) / 0.12, 2)); },
         [](double r) {
             const double x = (r - 10.55) / 0.12;
             return 0.15 * std::exp(-x * x) * (-2 * x / 0.12);
         }});
    solve_controls c;
    c.t_end = t_end;
    c.dt_store = g.dr();
    c.gradient_trigger = 1e6;
    c.pin_inflow_nodes = 2;
    return simulate(g, ic, p, c);
}

const residual_series& series_named(const std::vector<residual_series>& v,
                                    const std::string& q) {
    for (const auto& s : v)
        if (s.quantity == q) return s;
    FAIL("missing series " << q);
    return v.front();
}

}  // namespace

TEST_CASE("paths through a uniform state are straight lines at the wave speeds") {
    const grid g = make_grid(0.1, 2.0, 64);
    const auto F = uniform_field(g, 1.0, -3.0);
    const gas_params p{3.0, 1.0 / 3.0, 1};

    trace_controls tc;
    tc.record_dt = 1e-3;

    const auto p1 = trace_path(F, p, 1, 1.9, 0.0, 0.3, tc);
    REQUIRE(p1.termination == path_stop::reached_t_stop);
    REQUIRE(p1.pts.size() == 301);
    for (const auto& q : p1.pts) {
        REQUIRE(std::fabs(q.r - (1.9 - 4.0 * q.t)) < 1e-9);
        REQUIRE(std::fabs(q.c1 + 4.0) < 1e-12);
        REQUIRE(std::fabs(q.c2 + 2.0) < 1e-12);
        REQUIRE(std::fabs(q.w + 2.0) < 1e-12);
        REQUIRE(std::fabs(q.z + 4.0) < 1e-12);
        // zero spatial gradients: alpha and beta reduce to the source parts
        REQUIRE(std::fabs(q.alpha - (-3.0) / (q.r * -2.0)) < 1e-10);
        REQUIRE(std::fabs(q.beta + (-3.0) / (q.r * -4.0)) < 1e-10);
    }

    const auto p2 = trace_path(F, p, 2, 1.9, 0.0, 0.3, tc);
    REQUIRE(p2.termination == path_stop::reached_t_stop);
    REQUIRE(std::fabs(p2.pts.back().r - (1.9 - 2.0 * 0.3)) < 1e-9);
}

TEST_CASE("a path that runs out of data stops one cell short of the edge") {
    const grid g = make_grid(0.1, 2.0, 64);
    const auto F = uniform_field(g, 1.0, -3.0);
    const gas_params p{3.0, 1.0 / 3.0, 1};

    trace_controls tc;
    tc.record_dt = 1e-3;
    const auto path = trace_path(F, p, 1, 0.3, 0.0, 0.3, tc);
    REQUIRE(path.termination == path_stop::left_hull);
    REQUIRE(path.pts.back().t < 0.05);
    REQUIRE(path.pts.back().r >= g.r_min + g.dr() - 1e-9);
    // crossing time of r_min + dr at speed -4
    const double t_cross = (0.3 - (g.r_min + g.dr())) / 4.0;
    REQUIRE(path.pts.back().t > t_cross - 3 * tc.record_dt);
}

TEST_CASE("trusted region on a uniform state closes where the edges meet") {
    const grid g = make_grid(0.1, 2.0, 64);
    const auto F = uniform_field(g, 1.0, -3.0);
    const gas_params p{3.0, 1.0 / 3.0, 1};

    const auto om = build_omega(F, p, 1.0, 1.5, 1.0, 0.3, 5e-4);
    // left edge: 2-family line 1 - 2t; right edge: 1-family line 1.5 - 4t
    REQUIRE(std::fabs(om.r_left(0.1) - 0.8) < 1e-8);
    REQUIRE(std::fabs(om.r_right(0.1) - 1.1) < 1e-8);
    REQUIRE(om.t_m_observed);
    REQUIRE(std::fabs(om.t_m - 0.25) < 1e-8);
    REQUIRE(om.binding == "t_m");
    REQUIRE(om.T == Catch::Approx(0.25).margin(1e-8));

    REQUIRE(om.contains(1.0, 0.0));
    REQUIRE(om.contains(1.24, 0.05));
    REQUIRE(om.contains(0.65, 0.2));
    REQUIRE_FALSE(om.contains(0.89, 0.05));
    REQUIRE_FALSE(om.contains(1.31, 0.05));
    REQUIRE_FALSE(om.contains(1.05, 0.2));
    REQUIRE_FALSE(om.contains(0.65, 0.26));

    const auto om2 = build_omega(F, p, 1.0, 1.5, 0.1, 0.3, 5e-4);
    REQUIRE(om2.binding == "T_tilde");
    REQUIRE(om2.T == 0.1);

    const auto om3 = build_omega(F, p, 1.0, 1.5, 1.0, 0.05, 5e-4);
    REQUIRE_FALSE(om3.t_m_observed);
    REQUIRE(om3.binding == "t_cap");
    REQUIRE(om3.T == Catch::Approx(0.05));
}

TEST_CASE("transport-law residuals vanish with resolution on a smooth flow") {
    const gas_params p{2.0, 1.0, 2};

    struct worst {
        double beta_t, h, u, c2, z, alpha_t, w;
    };
    auto residuals_at = [&](int n) {
        const auto res = run_smooth_flow(p, n, 0.06);
        REQUIRE(res.summary.reason == stop_reason::reached_t_end);
        trace_controls tc;
        tc.record_dt = 2 * res.field.geometry().dr();

        const auto f1 = trace_path(res.field, p, 1, 10.5, 0.0, 0.058, tc);
        REQUIRE(f1.termination == path_stop::reached_t_stop);
        const auto r1 = path_derivative_residual(f1, p);

        const auto f2 = trace_path(res.field, p, 2, 10.5, 0.0, 0.058, tc);
        const auto r2 = path_derivative_residual(f2, p);

        worst w{};
        w.beta_t = series_named(r1, "beta_t").max_normalized;
        w.h = series_named(r1, "h").max_normalized;
        w.u = series_named(r1, "u").max_normalized;
        w.c2 = series_named(r1, "c2").max_normalized;
        w.z = series_named(r1, "z").max_normalized;
        w.alpha_t = series_named(r2, "alpha_t").max_normalized;
        w.w = series_named(r2, "w").max_normalized;
        return w;
    };

    const worst coarse = residuals_at(256);
    const worst fine = residuals_at(512);
    auto order = [](double c, double f) { return std::log2(c / f); };
    REQUIRE(order(coarse.beta_t, fine.beta_t) > 2.0);
    REQUIRE(order(coarse.h, fine.h) > 2.0);
    REQUIRE(order(coarse.u, fine.u) > 2.0);
    REQUIRE(order(coarse.c2, fine.c2) > 2.0);
    REQUIRE(order(coarse.z, fine.z) > 2.0);
    REQUIRE(order(coarse.alpha_t, fine.alpha_t) > 2.0);
    REQUIRE(order(coarse.w, fine.w) > 2.0);
    REQUIRE(fine.beta_t < 1e-3);
    REQUIRE(fine.h < 1e-3);
    REQUIRE(fine.u < 1e-3);
    REQUIRE(fine.c2 < 1e-3);
    REQUIRE(fine.z < 1e-3);
    REQUIRE(fine.alpha_t < 1e-3);
    REQUIRE(fine.w < 1e-3);
}

TEST_CASE("halving the tracer tolerance barely moves the endpoint") {
    const gas_params p{2.0, 1.0, 2};
    const auto res = run_smooth_flow(p, 256, 0.04);

    trace_controls tc;
    tc.record_dt = 1e-3;
    tc.rel_tol = 1e-8;
    const auto a = trace_path(res.field, p, 1, 10.5, 0.0, 0.038, tc);
    tc.rel_tol = 5e-9;
    const auto b = trace_path(res.field, p, 1, 10.5, 0.0, 0.038, tc);
    REQUIRE(a.pts.size() == b.pts.size());
    REQUIRE(std::fabs(a.pts.back().r - b.pts.back().r) < 10 * 1e-8 * 10.5);
}

TEST_CASE("same-family paths in a steepening wave do not cross") {
    const gas_params p{3.0, 1.0 / 3.0, 1};
    const grid g = make_grid(10.0, 11.0, 512);
    // left-moving simple wave: w = u + h fixed at -2, u steepening
    const auto ic = build_initial_field(
        g,
        {[](double r) { return 1.0 + 0.5 * std::tanh((r - 10.5) / 0.1); },
         [](double r) { return 0.5 / (0.1 * std::pow(std::cosh((r - 10.5) / 0.1), 2)); }},
        {[](double r) { return -3.0 - 0.5 * std::tanh((r - 10.5) / 0.1); },
         [](double r) { return -0.5 / (0.1 * std::pow(std::cosh((r - 10.5) / 0.1), 2)); }});
    solve_controls c;
    c.t_end = 0.04;
    c.dt_store = g.dr();
    c.gradient_trigger = 1e6;
    c.pin_inflow_nodes = 2;
    const auto res = simulate(g, ic, p, c);
    REQUIRE(res.summary.reason == stop_reason::reached_t_end);

    trace_controls tc;
    tc.record_dt = 1e-3;
    const auto pa = trace_path(res.field, p, 1, 10.40, 0.0, 0.038, tc);
    const auto pb = trace_path(res.field, p, 1, 10.55, 0.0, 0.038, tc);
    REQUIRE(pa.pts.size() == pb.pts.size());
    for (size_t i = 0; i < pa.pts.size(); ++i)
        REQUIRE(pb.pts[i].r > pa.pts[i].r);
    // compressive: the gap between the two paths shrinks
    REQUIRE(pb.pts.back().r - pa.pts.back().r <
            0.8 * (pb.pts.front().r - pa.pts.front().r));

    // a gradient ceiling cuts the path riding the crest short: the slope
    // there steepens from 5 toward 5/(1 - 10t)
    tc.grad_ceiling = 7.0;
    const auto pc = trace_path(res.field, p, 1, 10.50, 0.0, 0.038, tc);
    REQUIRE(pc.termination == path_stop::blowup_vicinity);
    REQUIRE(pc.pts.back().t < 0.035);
    REQUIRE(std::max(std::fabs(pc.pts.back().u_r), std::fabs(pc.pts.back().h_r)) > 7.0);
}

TEST_CASE("paths on a steady flow ride the frozen speed profile") {
    const gas_params p{3.0, 1.0 / 3.0, 1};
    const auto sp = make_stationary(p, 1.0, 0.5, -3.0);
    const grid g = make_grid(1.2, 2.0, 512);
    field_snapshot ic;
    ic.t = 0;
    sp.tabulate(g, ic.h, ic.u);
    solve_controls c;
    c.t_end = 0.1;
    c.dt_store = g.dr() * 4;
    c.pin_inflow_nodes = 2;
    const auto res = simulate(g, ic, p, c);
    REQUIRE(res.summary.reason == stop_reason::reached_t_end);

    trace_controls tc;
    tc.record_dt = c.dt_store * 2;
    const auto path = trace_path(res.field, p, 1, 1.9, 0.0, 0.095, tc);
    REQUIRE(path.termination == path_stop::reached_t_stop);
    for (const auto& q : path.pts) {
        const auto st = sp.at(q.r);
        REQUIRE(std::fabs(q.c1 - (st.u - st.h)) < 1e-7);
        // steady supersonic flow carries zero gradient variables
        REQUIRE(std::fabs(q.alpha_t) < 1e-6);
        REQUIRE(std::fabs(q.beta_t) < 1e-6);
    }

    const auto rs = path_derivative_residual(path, p);
    REQUIRE(series_named(rs, "h").max_normalized < 1e-4);
    REQUIRE(series_named(rs, "u").max_normalized < 1e-4);
    REQUIRE(series_named(rs, "c2").max_normalized < 1e-4);
    REQUIRE(series_named(rs, "z").max_normalized < 1e-4);
    // both sides of the weighted-gradient law are at truncation level here
    REQUIRE(series_named(rs, "beta_t").max_abs < 1e-4);
}

TEST_CASE("quantity sampling and tracer input validation") {
    const grid g = make_grid(0.1, 2.0, 64);
    const auto F = uniform_field(g, 1.0, -3.0);
    const gas_params p{3.0, 1.0 / 3.0, 1};

    trace_controls tc;
    tc.record_dt = 1e-2;
    const auto path = trace_path(F, p, 1, 1.9, 0.0, 0.2, tc);

    const auto hs = sample_along_path(path, "h");
    REQUIRE(hs.size() == path.pts.size());
    REQUIRE(hs.front().second == Catch::Approx(1.0));
    const auto ws = sample_along_path(path, "w");
    REQUIRE(ws.back().second == Catch::Approx(-2.0));
    REQUIRE_THROWS_AS(sample_along_path(path, "vorticity"), input_error);

    REQUIRE_THROWS_AS(trace_path(F, p, 3, 1.9, 0.0, 0.2, tc), input_error);
    REQUIRE_THROWS_AS(trace_path(F, p, 1, 2.5, 0.0, 0.2, tc), input_error);
    REQUIRE_THROWS_AS(trace_path(F, p, 1, 1.9, 0.2, 0.2, tc), input_error);
    REQUIRE_THROWS_AS(build_omega(F, p, 1.5, 1.0, 1.0, 0.3, 5e-4), input_error);

    char_path short_path = path;
    short_path.pts.resize(4);
    REQUIRE_THROWS_AS(path_derivative_residual(short_path, p), input_error);

    char_path skewed = path;
    skewed.pts[2].t += 0.3 * tc.record_dt;
    REQUIRE_THROWS_AS(path_derivative_residual(skewed, p), input_error);
}
