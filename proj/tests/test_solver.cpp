#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "inwave/fd.hpp"
#include "inwave/field.hpp"
#include "inwave/profile.hpp"
#include "inwave/solver.hpp"
#include "inwave/stationary.hpp"
#include "testutil.hpp"

using namespace inwave;
using testutil::rel_close;

namespace {

const gas_params g3{3.0, 1.0 / 3.0, 1};

profile const_profile(double v) {
    return {[v](double) { return v; }, [](double) { return 0.0; }};
}

/// 4th-order Gregory end-corrected trapezoid weights (O(dr^4) quadrature).
std::vector<double> gregory_weights(int n, double dr) {
    std::vector<double> w(n, dr);
    const double edge[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int k = 0; k < 3; ++k) {
        w[k] = dr * edge[k];
        w[n - 1 - k] = dr * edge[k];
    }
    return w;
}

double convergence_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("derivative stencils are exact on quartics") {
    auto poly = [](double x) {
        return 1.0 + x * (0.5 + x * (-2.0 + x * (0.25 + x * 0.125)));
    };
    auto dpoly = [](double x) {
        return 0.5 + x * (-4.0 + x * (0.75 + x * 0.5));
    };
    const int n = 23;
    const double dr = 0.17;
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = poly(0.3 + i * dr);
    const auto d = fd::derivative(f, dr);
    for (int i = 0; i < n; ++i) {
        REQUIRE(rel_close(d[i], dpoly(0.3 + i * dr), 1e-11));
        REQUIRE(d[i] == fd::deriv_at(f.data(), n, i, dr));
    }
    REQUIRE_THROWS_AS(fd::derivative(std::vector<double>(4, 1.0), dr), input_error);
}

TEST_CASE("grid validation and lookup") {
    const grid g = make_grid(1.0, 2.0, 101);
    REQUIRE(g.dr() == 0.01);
    REQUIRE(g.r(100) == 2.0);
    REQUIRE(g.cell_of(0.5) == 0);
    REQUIRE(g.cell_of(2.5) == 99);
    REQUIRE(g.cell_of(1.234) == 23);
    REQUIRE_THROWS_AS(make_grid(-1.0, 2.0, 32), input_error);
    REQUIRE_THROWS_AS(make_grid(2.0, 1.0, 32), input_error);
    REQUIRE_THROWS_AS(make_grid(1.0, 2.0, 8), input_error);
}

TEST_CASE("initial field sampling") {
    const grid g = make_grid(1.0, 2.0, 33);
    const auto s = build_initial_field(g, const_profile(1.0), const_profile(-3.0));
    REQUIRE(s.t == 0.0);
    for (int i = 0; i < g.n; ++i) {
        REQUIRE(s.h[i] == 1.0);
        REQUIRE(s.u[i] == -3.0);
    }
    REQUIRE_THROWS_AS(build_initial_field(g, const_profile(-0.1), const_profile(1.0)),
                      vacuum_error);
}

TEST_CASE("rhs on a constant state is the pure geometric source") {
    const grid g = make_grid(1.0, 2.0, 64);
    for (int m : {1, 2}) {
        const gas_params p{3.0, 1.0 / 3.0, m};
        const auto s = build_initial_field(g, const_profile(1.0), const_profile(-3.0));
        std::vector<double> h_t, u_t;
        rhs_eval(g, s.h, s.u, p, h_t, u_t);
        for (int i = 0; i < g.n; ++i) {
            const double src = -(p.gamma - 1) / 2 * m * (-3.0) * 1.0 / g.r(i);
            REQUIRE(rel_close(h_t[i], src, 1e-13));
            REQUIRE(std::fabs(u_t[i]) < 1e-12);
        }
    }
}

TEST_CASE("rhs matches a manufactured solution at 4th order") {
    auto h_m = [](double r) { return 1.0 + 0.2 * std::sin(r); };
    auto hr_m = [](double r) { return 0.2 * std::cos(r); };
    auto u_m = [](double r) { return -3.0 + 0.3 * std::cos(2 * r); };
    auto ur_m = [](double r) { return -0.6 * std::sin(2 * r); };
    const gas_params p{3.0, 1.0 / 3.0, 2};

    auto max_err = [&](int n) {
        const grid g = make_grid(1.0, 2.0, n);
        const auto s = build_initial_field(g, {h_m, hr_m}, {u_m, ur_m});
        std::vector<double> h_t, u_t;
        rhs_eval(g, s.h, s.u, p, h_t, u_t);
        double e = 0;
        for (int i = 0; i < g.n; ++i) {
            const double r = g.r(i), h = h_m(r), u = u_m(r);
            const double ht_ex = -u * hr_m(r) - (p.gamma - 1) / 2 * h * ur_m(r) -
                                 (p.gamma - 1) / 2 * p.m * u * h / r;
            const double ut_ex = -u * ur_m(r) - 2 / (p.gamma - 1) * h * hr_m(r);
            e = std::max(e, std::fabs(h_t[i] - ht_ex));
            e = std::max(e, std::fabs(u_t[i] - ut_ex));
        }
        return e;
    };
    const double e1 = max_err(128), e2 = max_err(256), e3 = max_err(512);
    REQUIRE(convergence_order(e1, e2) >= 3.5);
    REQUIRE(convergence_order(e2, e3) >= 3.5);
}

TEST_CASE("stationary profile satisfies its invariants") {
    for (int m : {1, 2}) {
        const gas_params p{3.0, 1.0 / 3.0, m};
        const auto sp = make_stationary(p, 1.0, 0.5, -3.0);
        for (double r = 0.8; r <= 3.0; r += 0.037) {
            const auto s = sp.at(r);
            REQUIRE(sp.mass_flux_residual(s.r, s.h, s.u) < 1e-12);
            REQUIRE(sp.bernoulli_residual(s.h, s.u) < 1e-12);
            REQUIRE(s.u < -s.h);  // stays supersonic inward
        }
        const auto anchor = sp.at(1.0);
        REQUIRE(rel_close(anchor.h, 0.5, 1e-12));
        REQUIRE(rel_close(anchor.u, -3.0, 1e-12));
    }
    REQUIRE_THROWS_AS(make_stationary(g3, 1.0, 0.5, -0.4), input_error);
}

TEST_CASE("stationary branch terminates at the sonic radius") {
    const auto sp = make_stationary(g3, 1.0, 0.5, -3.0);
    // critical radius for this anchor: r_c = |C1| / (rho_s h_s) with
    // h_s^2 = 2 C2 (gamma-1)/(gamma+1); rho = h at gamma=3, K=1/3
    const double h_s = std::sqrt(sp.C2);
    const double r_c = -sp.C1 / (h_s * h_s);
    REQUIRE_THROWS_AS(sp.at(r_c * 0.98), sonic_error);
    REQUIRE_NOTHROW(sp.at(r_c * 1.05));
    try {
        sp.at(r_c * 0.5);
        FAIL("expected sonic_error");
    } catch (const sonic_error& e) {
        REQUIRE(std::string(e.what()).find("r = ") != std::string::npos);
    }
}

TEST_CASE("larger symmetry exponent steepens the stationary velocity") {
    const gas_params p1{3.0, 1.0 / 3.0, 1}, p2{3.0, 1.0 / 3.0, 2};
    const auto s1 = make_stationary(p1, 1.0, 0.5, -3.0);
    const auto s2 = make_stationary(p2, 1.0, 0.5, -3.0);
    for (double r : {0.85, 0.9, 0.95, 1.1, 1.3}) {
        // stronger geometric convergence moves |u| away from the anchor faster
        REQUIRE(std::fabs(s2.at(r).u + 3.0) > std::fabs(s1.at(r).u + 3.0));
    }
}

TEST_CASE("gradient variables vanish on the stationary profile at 4th order") {
    const gas_params p{3.0, 1.0 / 3.0, 2};
    const auto sp = make_stationary(p, 1.0, 0.5, -3.0);
    auto max_ab = [&](int n) {
        const grid g = make_grid(1.2, 2.0, n);
        std::vector<double> h, u;
        sp.tabulate(g, h, u);
        const auto h_r = fd::derivative(h, g.dr());
        const auto u_r = fd::derivative(u, g.dr());
        double worst = 0;
        for (int i = 0; i < g.n; ++i) {
            const auto ab = alpha_beta(point_state{g.r(i), h[i], u[i]}, u_r[i], h_r[i], p);
            worst = std::max({worst, std::fabs(ab.alpha), std::fabs(ab.beta)});
        }
        return worst;
    };
    const double e1 = max_ab(128), e2 = max_ab(256), e3 = max_ab(512);
    REQUIRE(convergence_order(e1, e2) >= 3.5);
    REQUIRE(convergence_order(e2, e3) >= 3.5);
    REQUIRE(e3 < 1e-8);
}

TEST_CASE("step rejects a CFL-violating dt") {
    const grid g = make_grid(1.0, 2.0, 64);
    const auto s0 = build_initial_field(g, const_profile(1.0), const_profile(-3.0));
    const double dt_max = 0.4 * g.dr() / 4.0;  // max speed |u|+h = 4
    REQUIRE_THROWS_AS(step(g, s0, 2 * dt_max, g3), input_error);
    REQUIRE_NOTHROW(step(g, s0, 0.9 * dt_max, g3));
    const auto s1 = step(g, s0, 0.9 * dt_max, g3);
    REQUIRE(s1.t == 0.9 * dt_max);
}

TEST_CASE("integrating the stationary profile converges at 4th order") {
    const gas_params p{3.0, 1.0 / 3.0, 1};
    const auto sp = make_stationary(p, 1.0, 0.5, -3.0);
    auto final_err = [&](int n) {
        const grid g = make_grid(1.2, 2.0, n);
        field_snapshot ic;
        ic.t = 0;
        sp.tabulate(g, ic.h, ic.u);
        solve_controls c;
        c.t_end = 0.1;
        c.dt_store = 0.05;
        c.pin_inflow_nodes = 2;
        const auto res = simulate(g, ic, p, c);
        REQUIRE(res.summary.reason == stop_reason::reached_t_end);
        const auto& last = res.field.snapshots().back();
        double e = 0;
        for (int i = 0; i < g.n; ++i) {
            e = std::max(e, std::fabs(last.h[i] - ic.h[i]));
            e = std::max(e, std::fabs(last.u[i] - ic.u[i]));
        }
        return e;
    };
    const double e1 = final_err(128), e2 = final_err(256), e3 = final_err(512);
    REQUIRE(convergence_order(e1, e2) >= 3.5);
    REQUIRE(convergence_order(e2, e3) >= 3.5);
}

TEST_CASE("snapshot ladder and stop bookkeeping") {
    const gas_params p{3.0, 1.0 / 3.0, 1};
    const auto sp = make_stationary(p, 1.0, 0.5, -3.0);
    const grid g = make_grid(1.2, 2.0, 64);
    field_snapshot ic;
    sp.tabulate(g, ic.h, ic.u);
    solve_controls c;
    c.t_end = 0.02;
    c.dt_store = 0.005;
    c.pin_inflow_nodes = 2;
    const auto res = simulate(g, ic, p, c);
    const auto& snaps = res.field.snapshots();
    REQUIRE(snaps.size() == 5);  // t = 0, .005, .010, .015, .020
    for (size_t k = 0; k < snaps.size(); ++k)
        REQUIRE(std::fabs(snaps[k].t - 0.005 * double(k)) < 1e-12);
    REQUIRE(res.summary.t_stop == snaps.back().t);
    REQUIRE(res.summary.steps > 0);
    // pinned inflow nodes never move
    for (int i = g.n - 2; i < g.n; ++i) {
        REQUIRE(snaps.back().h[i] == ic.h[i]);
        REQUIRE(snaps.back().u[i] == ic.u[i]);
    }
}

TEST_CASE("gradient trigger stops a compressive run") {
    // compressive 1-simple wave (w = u + h held constant at gamma = 3), so
    // the full gradient rides the slow family and steepens cleanly
    const grid g = make_grid(10.0, 11.0, 512);
    auto u0 = profile{[](double r) { return -3.0 - 0.5 * std::tanh((r - 10.5) / 0.02); },
                      [](double r) {
                          const double c = std::cosh((r - 10.5) / 0.02);
                          return -0.5 / (0.02 * c * c);
                      }};
    auto h0 = profile{[&](double r) { return -2.0 - u0.value(r); },
                      [&](double r) { return -u0.deriv(r); }};
    const auto ic = build_initial_field(g, h0, u0);
    solve_controls c;
    c.t_end = 0.1;
    c.dt_store = 0.001;
    c.pin_inflow_nodes = 2;
    // initial max |u_r| = 25; ceiling below the grid's representable shock
    // plateau (~ jump/dr) so the genuine steepening fires it
    c.gradient_trigger = 150.0;
    const auto res = simulate(g, ic, g3, c);
    REQUIRE(res.summary.reason == stop_reason::gradient_trigger);
    REQUIRE(res.summary.t_stop < 0.04);
    REQUIRE(res.summary.max_gradient_at_stop > 150.0);
    REQUIRE(res.summary.initial_max_gradient < 30.0);
    // stopped state is stored
    REQUIRE(res.field.t_back() == res.summary.t_stop);
}

TEST_CASE("vacuum guard halts a run that loses positivity") {
    // a sub-cell dip in h (0.6 cells wide at n = 128) makes the dispersive
    // scheme overshoot below zero: the guard must stop the run rather than
    // integrate h <= 0 states
    const grid g = make_grid(10.0, 11.0, 128);
    auto h0 = profile{[](double r) {
                          const double x = (r - 10.5) / 0.005;
                          return 0.5 - 0.49 * std::exp(-x * x);
                      },
                      [](double r) {
                          const double x = (r - 10.5) / 0.005;
                          return 0.49 * 2 * x / 0.005 * std::exp(-x * x);
                      }};
    const auto ic = build_initial_field(g, h0, const_profile(-3.0));
    solve_controls c;
    c.t_end = 0.5;
    c.gradient_trigger = 1e12;
    const auto res = simulate(g, ic, g3, c);
    REQUIRE(res.summary.reason == stop_reason::vacuum);
    REQUIRE(res.summary.t_stop < 0.1);
}

TEST_CASE("discrete mass balance holds at truncation order") {
    // perturbed stationary state: d/dt of the discrete mass integral must
    // match the boundary flux difference of r^m rho u at 4th order
    const gas_params p{3.0, 1.0 / 3.0, 2};
    const auto sp = make_stationary(p, 1.0, 0.5, -3.0);
    auto imbalance = [&](int n) {
        const grid g = make_grid(1.2, 2.0, n);
        std::vector<double> h(g.n), u(g.n);
        for (int i = 0; i < g.n; ++i) {
            const auto s = sp.at(g.r(i));
            h[i] = s.h * (1 + 0.05 * std::sin(3 * g.r(i)));
            u[i] = s.u + 0.1 * std::cos(2 * g.r(i));
        }
        std::vector<double> h_t, u_t;
        rhs_eval(g, h, u, p, h_t, u_t);
        const auto w = gregory_weights(g.n, g.dr());
        double dM = 0;
        for (int i = 0; i < g.n; ++i) {
            const double rho = density_from_sound_speed(h[i], p);
            // d(rho)/dh = 2 rho / ((gamma-1) h)
            dM += w[i] * std::pow(g.r(i), double(p.m)) * 2 * rho /
                  ((p.gamma - 1) * h[i]) * h_t[i];
        }
        auto flux = [&](int i) {
            return std::pow(g.r(i), double(p.m)) * density_from_sound_speed(h[i], p) *
                   u[i];
        };
        return std::fabs(dM + flux(g.n - 1) - flux(0));
    };
    const double e1 = imbalance(128), e2 = imbalance(256), e3 = imbalance(512);
    REQUIRE(convergence_order(e1, e2) >= 3.5);
    REQUIRE(convergence_order(e2, e3) >= 3.5);
}

TEST_CASE("space-time field validation") {
    const grid g = make_grid(1.0, 2.0, 16);
    space_time_field f(g);
    field_snapshot s;
    s.t = 0;
    s.h.assign(16, 1.0);
    s.u.assign(16, -3.0);
    s.h_t.assign(16, 0.0);
    s.u_t.assign(16, 0.0);
    f.push(s);
    REQUIRE_THROWS_AS(f.push(s), input_error);  // non-increasing t
    field_snapshot bad = s;
    bad.t = 1;
    bad.h[3] = 0.0;
    REQUIRE_THROWS_AS(f.push(bad), vacuum_error);
    field_snapshot short_arr = s;
    short_arr.t = 1;
    short_arr.u.resize(7);
    REQUIRE_THROWS_AS(f.push(short_arr), input_error);
    REQUIRE_THROWS_AS(f.sample(1.5, 0.5), input_error);  // outside hull in t
    REQUIRE_THROWS_AS(f.sample(2.5, 0.0), input_error);  // outside hull in r
    const auto smp = f.sample(1.5, 0.0);
    REQUIRE(smp.h == 1.0);
    REQUIRE(smp.u == -3.0);
}

TEST_CASE("field queries reproduce cubic space-time data exactly") {
    // h = a(r) + b(r) t + c t^2 + d t^3 with cubic a, b: both the r-Hermite
    // (exact nodal slopes on cubics) and the t-Hermite (cubic in t) are exact
    auto a = [](double r) { return 1.0 + 0.1 * r + 0.02 * r * r - 0.005 * r * r * r; };
    auto ar = [](double r) { return 0.1 + 0.04 * r - 0.015 * r * r; };
    auto b = [](double r) { return 0.3 - 0.05 * r * r; };
    auto br = [](double r) { return -0.1 * r; };
    const double c2 = 0.4, d3 = -0.2;
    const grid g = make_grid(1.0, 2.0, 21);
    space_time_field f(g);
    for (double t : {0.0, 0.1, 0.2}) {
        field_snapshot s;
        s.t = t;
        s.h.resize(g.n);
        s.u.resize(g.n);
        s.h_t.resize(g.n);
        s.u_t.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double r = g.r(i);
            s.h[i] = a(r) + b(r) * t + c2 * t * t + d3 * t * t * t;
            s.h_t[i] = b(r) + 2 * c2 * t + 3 * d3 * t * t;
            s.u[i] = -3.0 + 0.5 * s.h[i];
            s.u_t[i] = 0.5 * s.h_t[i];
        }
        f.push(std::move(s));
    }
    for (double r : {1.0, 1.2345, 1.777, 2.0}) {
        for (double t : {0.0, 0.033, 0.15, 0.2}) {
            const auto smp = f.sample(r, t);
            const double h_ex = a(r) + b(r) * t + c2 * t * t + d3 * t * t * t;
            const double ht_ex = b(r) + 2 * c2 * t + 3 * d3 * t * t;
            const double hr_ex = ar(r) + br(r) * t;
            REQUIRE(rel_close(smp.h, h_ex, 1e-12));
            REQUIRE(rel_close(smp.h_t, ht_ex, 1e-12));
            REQUIRE(rel_close(smp.h_r, hr_ex, 1e-11));
            REQUIRE(rel_close(smp.u, -3.0 + 0.5 * h_ex, 1e-12));
            REQUIRE(rel_close(smp.u_r, 0.5 * hr_ex, 1e-11));
        }
    }
}

TEST_CASE("profile relaxation to constants") {
    // f linear: value 2 + 3 r on [1, 2], relax width 0.25
    const profile f{[](double r) { return 2 + 3 * r; }, [](double) { return 3.0; }};
    const auto e = blend_to_constant(f, 1.0, 2.0, 0.25);
    REQUIRE(e.value(1.5) == f.value(1.5));
    REQUIRE(e.deriv(1.7) == 3.0);
    // junction continuity
    REQUIRE(rel_close(e.value(1.0 - 1e-9), e.value(1.0), 1e-7));
    REQUIRE(rel_close(e.deriv(1.0 - 1e-9), 3.0, 1e-6));
    // settled constants beyond the relax width
    REQUIRE(e.deriv(0.7) == 0.0);
    REQUIRE(e.value(0.5) == e.value(0.7));
    REQUIRE(rel_close(e.value(0.5), f.value(1.0) - 3.0 * 0.125, 1e-12));
    REQUIRE(e.deriv(2.3) == 0.0);
    REQUIRE(rel_close(e.value(2.5), f.value(2.0) + 3.0 * 0.125, 1e-12));
    // monotone derivative relaxation in between
    for (double x = 0.0; x < 0.25; x += 0.01) {
        const double d = e.deriv(1.0 - x);
        REQUIRE(d >= 0.0);
        REQUIRE(d <= 3.0);
    }
}
