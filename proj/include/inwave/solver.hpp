#pragma once

// Method-of-lines integrator for the smooth radial flow system
//   h_t = -u h_r - ((g-1)/2) h u_r - ((g-1)/2) m u h / r
//   u_t = -u u_r - (2/(g-1)) h h_r
// using the shared pointwise kernel for the right side, 4th-order spatial
// differences, and the classical 4-stage Runge-Kutta step under a CFL
// control.  Boundary nodes use one-sided stencils; runs meant for
// certification integrate on a padded interval so boundary effects cannot
// reach the trusted region (finite numerical speed of propagation).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "inwave/errors.hpp"
#include "inwave/fd.hpp"
#include "inwave/field.hpp"
#include "inwave/gas.hpp"
#include "inwave/profile.hpp"

namespace inwave {

enum class stop_reason { reached_t_end, gradient_trigger, vacuum, non_finite, dt_underflow };

inline const char* to_string(stop_reason s) {
    switch (s) {
        case stop_reason::reached_t_end: return "reached_t_end";
        case stop_reason::gradient_trigger: return "gradient_trigger";
        case stop_reason::vacuum: return "vacuum";
        case stop_reason::non_finite: return "non_finite";
        case stop_reason::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

struct solve_controls {
    double cfl = 0.4;
    double t_end = 0;
    double dt_store = 0;          // snapshot stride; <= 0 picks dr
    double gradient_trigger = 0;  // ceiling on max(|u_r|, |h_r|); <= 0 picks
                                  // 1e4 x the initial max gradient
    int pin_inflow_nodes = 0;     // hold this many right-edge nodes at their
                                  // initial values (supersonic inflow)
};

struct solve_summary {
    stop_reason reason = stop_reason::reached_t_end;
    double t_stop = 0;
    int steps = 0;
    double max_gradient_at_stop = 0;
    double trigger_ceiling = 0;  // resolved absolute ceiling used
    double initial_max_gradient = 0;
};

struct solve_result {
    solve_summary summary;
    space_time_field field;
};

/// Samples initial profiles exactly at grid nodes (no pre-smoothing).
inline field_snapshot build_initial_field(const grid& g, const profile& h0,
                                          const profile& u0) {
    field_snapshot s;
    s.t = 0;
    s.h.resize(g.n);
    s.u.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double r = g.r(i);
        s.h[i] = h0.value(r);
        s.u[i] = u0.value(r);
        if (!(s.h[i] > 0))
            throw vacuum_error("initial data: h0(" + std::to_string(r) +
                               ") is not positive");
    }
    return s;
}

namespace detail {

struct rhs_buffers {
    std::vector<double> h_r, u_r, h_t, u_t;
};

/// Fills time derivatives and gradients for the current arrays; returns the
/// largest wave speed magnitude.  Throws vacuum_error on h <= 0.
inline double rhs_eval(const grid& g, const std::vector<double>& h,
                       const std::vector<double>& u, const gas_params& p,
                       rhs_buffers& b) {
    const int n = g.n;
    fd::derivative(h, g.dr(), b.h_r);
    fd::derivative(u, g.dr(), b.u_r);
    b.h_t.resize(n);
    b.u_t.resize(n);
    double max_speed = 0;
    for (int i = 0; i < n; ++i) {
        if (!(h[i] > 0))
            throw vacuum_error("rhs: nonpositive sound speed at r = " +
                               std::to_string(g.r(i)));
        const point_state s{g.r(i), h[i], u[i]};
        const auto d = primitive_time_derivs(s, b.u_r[i], b.h_r[i], p);
        b.h_t[i] = d.h_t;
        b.u_t[i] = d.u_t;
        max_speed = std::max(max_speed, std::fabs(u[i]) + h[i]);
    }
    return max_speed;
}

inline double max_abs_gradient(const rhs_buffers& b) {
    double m = 0;
    for (double v : b.h_r) m = std::max(m, std::fabs(v));
    for (double v : b.u_r) m = std::max(m, std::fabs(v));
    return m;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace detail

/// Public rhs entry point: time derivatives of one snapshot.
inline void rhs_eval(const grid& g, const std::vector<double>& h,
                     const std::vector<double>& u, const gas_params& p,
                     std::vector<double>& h_t, std::vector<double>& u_t) {
    detail::rhs_buffers b;
    detail::rhs_eval(g, h, u, p, b);
    h_t = std::move(b.h_t);
    u_t = std::move(b.u_t);
}

/// One classical RK4 step; rejects dt that violates the CFL control.
inline field_snapshot step(const grid& g, const field_snapshot& snap, double dt,
                           const gas_params& p, double cfl = 0.4) {
    detail::rhs_buffers k1, k2, k3, k4;
    const double max_speed = detail::rhs_eval(g, snap.h, snap.u, p, k1);
    if (!(dt > 0) || dt > cfl * g.dr() / max_speed)
        throw input_error("step: dt violates the CFL control");

    const int n = g.n;
    std::vector<double> h(n), u(n);
    auto at = [&](const detail::rhs_buffers& k, double frac) {
        for (int i = 0; i < n; ++i) {
            h[i] = snap.h[i] + frac * dt * k.h_t[i];
            u[i] = snap.u[i] + frac * dt * k.u_t[i];
        }
    };
    at(k1, 0.5);
    detail::rhs_eval(g, h, u, p, k2);
    at(k2, 0.5);
    detail::rhs_eval(g, h, u, p, k3);
    at(k3, 1.0);
    detail::rhs_eval(g, h, u, p, k4);

    field_snapshot out;
    out.t = snap.t + dt;
    out.h.resize(n);
    out.u.resize(n);
    for (int i = 0; i < n; ++i) {
        out.h[i] = snap.h[i] + dt / 6 * (k1.h_t[i] + 2 * k2.h_t[i] + 2 * k3.h_t[i] +
                                         k4.h_t[i]);
        out.u[i] = snap.u[i] + dt / 6 * (k1.u_t[i] + 2 * k2.u_t[i] + 2 * k3.u_t[i] +
                                         k4.u_t[i]);
    }
    return out;
}

/// Integrates from the initial snapshot, storing snapshots on the uniform
/// ladder k * dt_store plus the initial and stopping states.
inline solve_result simulate(const grid& g, const field_snapshot& ic,
                             const gas_params& p, const solve_controls& c) {
    if (!(c.t_end > 0)) throw input_error("simulate: t_end must be positive");
    if (!(c.cfl > 0) || c.cfl > 1) throw input_error("simulate: cfl must be in (0, 1]");

    solve_result out{{}, space_time_field(g)};
    const int n = g.n;
    std::vector<double> h = ic.h, u = ic.u;
    double t = 0;

    const double dt_store = c.dt_store > 0 ? c.dt_store : g.dr();
    detail::rhs_buffers b;
    detail::rhs_buffers k1, k2, k3, k4;
    std::vector<double> hs(n), us(n);

    double max_speed = detail::rhs_eval(g, h, u, p, b);
    out.summary.initial_max_gradient = detail::max_abs_gradient(b);
    const double ceiling = c.gradient_trigger > 0
                               ? c.gradient_trigger
                               : 1e4 * std::max(out.summary.initial_max_gradient, 1.0);
    out.summary.trigger_ceiling = ceiling;

    auto store = [&](double time) {
        field_snapshot s;
        s.t = time;
        s.h = h;
        s.u = u;
        s.h_t = b.h_t;
        s.u_t = b.u_t;
        out.field.push(std::move(s));
    };
    store(0.0);
    long next_store = 1;

    auto finish = [&](stop_reason why, double grad) {
        out.summary.reason = why;
        out.summary.t_stop = t;
        out.summary.max_gradient_at_stop = grad;
        if (out.field.t_back() < t &&
            (why == stop_reason::reached_t_end || why == stop_reason::gradient_trigger))
            store(t);
    };

    for (;;) {
        // b holds the rhs of the current committed state
        const double grad = detail::max_abs_gradient(b);
        if (grad > ceiling) {
            finish(stop_reason::gradient_trigger, grad);
            return out;
        }
        if (t >= c.t_end * (1 - 1e-14)) {
            finish(stop_reason::reached_t_end, grad);
            return out;
        }

        const double t_target = std::min(c.t_end, next_store * dt_store);
        double dt = std::min(c.cfl * g.dr() / max_speed, t_target - t);
        if (!(dt > c.t_end * 1e-14)) {
            finish(stop_reason::dt_underflow, grad);
            return out;
        }

        // RK4 stages; any vacuum inside a stage aborts the step
        try {
            k1 = b;
            auto at = [&](const detail::rhs_buffers& k, double frac) {
                for (int i = 0; i < n; ++i) {
                    hs[i] = h[i] + frac * dt * k.h_t[i];
                    us[i] = u[i] + frac * dt * k.u_t[i];
                }
            };
            at(k1, 0.5);
            detail::rhs_eval(g, hs, us, p, k2);
            at(k2, 0.5);
            detail::rhs_eval(g, hs, us, p, k3);
            at(k3, 1.0);
            detail::rhs_eval(g, hs, us, p, k4);
            for (int i = 0; i < n; ++i) {
                h[i] += dt / 6 * (k1.h_t[i] + 2 * k2.h_t[i] + 2 * k3.h_t[i] + k4.h_t[i]);
                u[i] += dt / 6 * (k1.u_t[i] + 2 * k2.u_t[i] + 2 * k3.u_t[i] + k4.u_t[i]);
            }
        } catch (const vacuum_error&) {
            finish(stop_reason::vacuum, grad);
            return out;
        }
        for (int i = n - c.pin_inflow_nodes; i < n; ++i) {
            h[i] = ic.h[i];
            u[i] = ic.u[i];
        }
        t += dt;
        ++out.summary.steps;

        if (!detail::all_finite(h) || !detail::all_finite(u)) {
            finish(stop_reason::non_finite, grad);
            return out;
        }
        bool vacuum_now = false;
        for (double hv : h) vacuum_now |= !(hv > 0);
        if (vacuum_now) {
            finish(stop_reason::vacuum, grad);
            return out;
        }

        max_speed = detail::rhs_eval(g, h, u, p, b);
        if (t >= next_store * dt_store * (1 - 1e-14)) {
            store(t);
            ++next_store;
        }
    }
}

}  // namespace inwave
