#pragma once

// Characteristic-curve machinery over an immutable space-time field:
//   - adaptive Cash-Karp tracer for dr/dt = c_family(r, t) with uniform
//     recording, so path series support centered differences;
//   - the trusted region bounded left by the 2-characteristic from (r1, 0)
//     and right by the 1-characteristic from (r2, 0), closing where they
//     meet;
//   - residuals of the transport laws along paths: the weighted gradient
//     equations, the state rates, and the Riemann-variable source laws.
// Path gradients always come from the field's spatial stencil, never from
// differentiating the path samples, so these checks genuinely cross-validate
// the dynamics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "inwave/errors.hpp"
#include "inwave/field.hpp"
#include "inwave/gas.hpp"

namespace inwave {

enum class path_stop { reached_t_stop, left_hull, blowup_vicinity };

inline const char* to_string(path_stop s) {
    switch (s) {
        case path_stop::reached_t_stop: return "reached_t_stop";
        case path_stop::left_hull: return "left_hull";
        case path_stop::blowup_vicinity: return "blowup_vicinity";
    }
    return "unknown";
}

struct path_point {
    double t = 0, r = 0;
    double h = 0, u = 0;
    double h_r = 0, u_r = 0;
    double c1 = 0, c2 = 0, w = 0, z = 0;
    double alpha = 0, beta = 0;
    double alpha_t = 0, beta_t = 0;  // weighted (h^lambda) variants
};

struct char_path {
    int family = 1;
    double r_start = 0, t_start = 0;
    double record_dt = 0;
    path_stop termination = path_stop::reached_t_stop;
    std::vector<path_point> pts;
};

struct trace_controls {
    double rel_tol = 1e-8;
    double record_dt = 0;      // <= 0: span/1024
    double hull_margin = 0;    // <= 0: one grid cell
    double grad_ceiling = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double family_speed(const field_sample& f, int family) {
    return family == 1 ? f.u - f.h : f.u + f.h;
}

inline path_point record_point(const space_time_field& F, const gas_params& p, double r,
                               double t) {
    const field_sample f = F.sample(r, t);
    path_point q;
    q.t = t;
    q.r = r;
    q.h = f.h;
    q.u = f.u;
    q.h_r = f.h_r;
    q.u_r = f.u_r;
    const point_state s{r, f.h, f.u};
    const auto c = char_speeds(s);
    q.c1 = c.c1;
    q.c2 = c.c2;
    const auto rv = riemann_invariants(s, p);
    q.w = rv.w;
    q.z = rv.z;
    const auto gs = make_gradient_state(s, f.u_r, f.h_r, p);
    q.alpha = gs.alpha;
    q.beta = gs.beta;
    q.alpha_t = gs.alpha_t;
    q.beta_t = gs.beta_t;
    return q;
}

/// One adaptive Cash-Karp segment from (t, r) to exactly t_target.
/// Returns false when the integration cannot proceed without leaving the
/// field hull (r updated to the last accepted position).
inline bool advance_to(const space_time_field& F, int family, double& t, double& r,
                       double t_target, double rel_tol, double r_lo, double r_hi) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 3.0 / 10, a42 = -9.0 / 10, a43 = 6.0 / 5;
    static constexpr double a51 = -11.0 / 54, a52 = 5.0 / 2, a53 = -70.0 / 27,
                            a54 = 35.0 / 27;
    static constexpr double a61 = 1631.0 / 55296, a62 = 175.0 / 512, a63 = 575.0 / 13824,
                            a64 = 44275.0 / 110592, a65 = 253.0 / 4096;
    static constexpr double b1 = 37.0 / 378, b3 = 250.0 / 621, b4 = 125.0 / 594,
                            b6 = 512.0 / 1771;
    static constexpr double e1 = 37.0 / 378 - 2825.0 / 27648,
                            e3 = 250.0 / 621 - 18575.0 / 48384,
                            e4 = 125.0 / 594 - 13525.0 / 55296,
                            e5 = -277.0 / 14336, e6 = 512.0 / 1771 - 1.0 / 4;

    auto speed = [&](double rr, double tt) {
        if (rr < r_lo || rr > r_hi) throw input_error("tracer: left radial hull");
        return family_speed(F.sample(rr, tt), family);
    };

    double hstep = t_target - t;
    const double span = std::max(t_target - t, 1e-300);
    while (t < t_target) {
        hstep = std::min(hstep, t_target - t);
        if (hstep < 1e-14 * span) return false;
        double k1, k2, k3, k4, k5, k6, r_new, err;
        try {
            k1 = speed(r, t);
            k2 = speed(r + hstep * a21 * k1, t + hstep / 5);
            k3 = speed(r + hstep * (a31 * k1 + a32 * k2), t + hstep * 3 / 10);
            k4 = speed(r + hstep * (a41 * k1 + a42 * k2 + a43 * k3), t + hstep * 3 / 5);
            k5 = speed(r + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4),
                       t + hstep);
            k6 = speed(r + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                    a65 * k5),
                       t + hstep * 7 / 8);
            r_new = r + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b6 * k6);
            err = std::fabs(hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6));
            if (r_new < r_lo || r_new > r_hi)
                throw input_error("tracer: left radial hull");
        } catch (const input_error&) {
            hstep /= 2;
            continue;
        }
        const double tol = rel_tol * std::max(1.0, std::fabs(r));
        if (err > tol) {
            hstep *= std::max(0.2, 0.9 * std::pow(tol / err, 0.25));
            continue;
        }
        t += hstep;
        r = r_new;
        if (err > 0) hstep *= std::min(5.0, 0.9 * std::pow(tol / err, 0.2));
    }
    return true;
}

}  // namespace detail

/// Traces a characteristic of the given family from (r_start, t_start)
/// forward to t_stop (capped by the stored data), recording on the uniform
/// ladder t_start + k * record_dt.
inline char_path trace_path(const space_time_field& F, const gas_params& p, int family,
                            double r_start, double t_start, double t_stop,
                            const trace_controls& c = {}) {
    if (family != 1 && family != 2) throw input_error("trace_path: family must be 1 or 2");
    if (!F.in_hull(r_start, t_start))
        throw input_error("trace_path: start point outside the stored hull");
    const double t_cap = std::min(t_stop, F.t_back());
    if (!(t_cap > t_start)) throw input_error("trace_path: empty time span");

    const grid& g = F.geometry();
    const double margin = c.hull_margin > 0 ? c.hull_margin : g.dr();
    const double r_lo = g.r_min + margin, r_hi = g.r_max - margin;
    const double record_dt =
        c.record_dt > 0 ? c.record_dt : (t_cap - t_start) / 1024.0;

    char_path path;
    path.family = family;
    path.r_start = r_start;
    path.t_start = t_start;
    path.record_dt = record_dt;
    path.termination = path_stop::reached_t_stop;

    double t = t_start, r = r_start;
    for (long k = 0;; ++k) {
        const double t_rec = t_start + double(k) * record_dt;
        if (k > 0) {
            if (t_rec > t_cap * (1 + 1e-14) + 1e-300) break;
            if (!detail::advance_to(F, family, t, r, std::min(t_rec, t_cap), c.rel_tol,
                                    r_lo, r_hi)) {
                path.termination = path_stop::left_hull;
                break;
            }
        }
        const path_point q = detail::record_point(F, p, r, t);
        path.pts.push_back(q);
        if (std::max(std::fabs(q.u_r), std::fabs(q.h_r)) > c.grad_ceiling) {
            path.termination = path_stop::blowup_vicinity;
            break;
        }
        if (r <= r_lo || r >= r_hi) {
            path.termination = path_stop::left_hull;
            break;
        }
    }
    if (path.pts.empty()) throw numeric_error("trace_path: no samples recorded");
    return path;
}

/// (t, value) series for a named quantity along a path.
inline std::vector<std::pair<double, double>> sample_along_path(const char_path& path,
                                                                const std::string& q) {
    if (path.pts.empty()) throw input_error("sample_along_path: empty path");
    auto pick = [&](const path_point& s) -> double {
        if (q == "r") return s.r;
        if (q == "h") return s.h;
        if (q == "u") return s.u;
        if (q == "c1") return s.c1;
        if (q == "c2") return s.c2;
        if (q == "w") return s.w;
        if (q == "z") return s.z;
        if (q == "alpha") return s.alpha;
        if (q == "beta") return s.beta;
        if (q == "alpha_t") return s.alpha_t;
        if (q == "beta_t") return s.beta_t;
        if (q == "u_r") return s.u_r;
        if (q == "h_r") return s.h_r;
        throw input_error("sample_along_path: unknown quantity '" + q + "'");
    };
    std::vector<std::pair<double, double>> out;
    out.reserve(path.pts.size());
    for (const auto& s : path.pts) out.emplace_back(s.t, pick(s));
    return out;
}

struct residual_series {
    std::string quantity;
    std::vector<double> t, fd, rhs;
    double max_abs = 0;         // max |fd - rhs|
    double scale = 0;           // max over the series of max(|fd|, |rhs|)
    double max_normalized = 0;  // max_abs / max(scale, tiny)
};

namespace detail {

template <class Rhs>
residual_series series_for(const char_path& path, const std::string& name, Rhs rhs_of,
                           const std::vector<double>& values) {
    const auto& P = path.pts;
    const int n = int(P.size());
    residual_series s;
    s.quantity = name;
    const double dt = path.record_dt;
    for (int i = 2; i < n - 2; ++i) {
        const double fd = (values[i - 2] - 8 * values[i - 1] + 8 * values[i + 1] -
                           values[i + 2]) /
                          (12 * dt);
        const double rhs = rhs_of(P[i]);
        s.t.push_back(P[i].t);
        s.fd.push_back(fd);
        s.rhs.push_back(rhs);
        s.max_abs = std::max(s.max_abs, std::fabs(fd - rhs));
        s.scale = std::max({s.scale, std::fabs(fd), std::fabs(rhs)});
    }
    s.max_normalized = s.max_abs / std::max(s.scale, 1e-300);
    return s;
}

}  // namespace detail

/// Centered-difference residuals of the transport laws along a path:
/// family 1 checks {beta_t, h, u, c2, z}; family 2 checks {alpha_t, h, u, w}.
inline std::vector<residual_series> path_derivative_residual(const char_path& path,
                                                             const gas_params& p) {
    const auto& P = path.pts;
    if (P.size() < 5) throw input_error("path_derivative_residual: need >= 5 samples");
    // uniform ladder required for the centered stencil
    for (size_t i = 1; i < P.size(); ++i)
        if (std::fabs((P[i].t - P[i - 1].t) - path.record_dt) >
            1e-9 * std::max(path.record_dt, 1e-300))
            throw input_error("path_derivative_residual: nonuniform sample ladder");

    auto values = [&](auto get) {
        std::vector<double> v;
        v.reserve(P.size());
        for (const auto& s : P) v.push_back(get(s));
        return v;
    };
    auto state = [](const path_point& s) { return point_state{s.r, s.h, s.u}; };

    std::vector<residual_series> out;
    if (path.family == 1) {
        out.push_back(detail::series_for(
            path, "beta_t",
            [&](const path_point& s) {
                return riccati_rhs_tilde(state(s), s.alpha_t, s.beta_t, p).d1_beta_t;
            },
            values([](const path_point& s) { return s.beta_t; })));
        out.push_back(detail::series_for(
            path, "h",
            [&](const path_point& s) {
                return directional_derivs(state(s), s.alpha_t, p).d1_h;
            },
            values([](const path_point& s) { return s.h; })));
        out.push_back(detail::series_for(
            path, "u",
            [&](const path_point& s) {
                return directional_derivs(state(s), s.alpha_t, p).d1_u;
            },
            values([](const path_point& s) { return s.u; })));
        out.push_back(detail::series_for(
            path, "c2",
            [&](const path_point& s) {
                return directional_derivs(state(s), s.alpha_t, p).d1_c2;
            },
            values([](const path_point& s) { return s.c2; })));
        out.push_back(detail::series_for(
            path, "z",
            [&](const path_point& s) { return p.m * s.u * s.h / s.r; },
            values([](const path_point& s) { return s.z; })));
    } else {
        out.push_back(detail::series_for(
            path, "alpha_t",
            [&](const path_point& s) {
                return riccati_rhs_tilde(state(s), s.alpha_t, s.beta_t, p).d2_alpha_t;
            },
            values([](const path_point& s) { return s.alpha_t; })));
        out.push_back(detail::series_for(
            path, "h",
            [&](const path_point& s) {
                return d2_h_unweighted(state(s), s.beta, p);
            },
            values([](const path_point& s) { return s.h; })));
        out.push_back(detail::series_for(
            path, "u",
            [&](const path_point& s) {
                return d2_u_unweighted(state(s), s.beta, p);
            },
            values([](const path_point& s) { return s.u; })));
        out.push_back(detail::series_for(
            path, "w",
            [&](const path_point& s) { return -p.m * s.u * s.h / s.r; },
            values([](const path_point& s) { return s.w; })));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trusted space-time region
// ---------------------------------------------------------------------------

struct omega_region {
    double r1 = 0, r2 = 0;
    double T_tilde = 0, t_cap = 0;
    char_path left;   // 2-characteristic from (r1, 0)
    char_path right;  // 1-characteristic from (r2, 0)
    double t_m = std::numeric_limits<double>::infinity();  // sentinel: not observed
    bool t_m_observed = false;
    double T = 0;
    std::string binding;  // "T_tilde" | "t_m" | "t_cap"
    bool truncated = false;  // a boundary path left the hull early

    double r_left(double t) const { return interp(left, t); }
    double r_right(double t) const { return interp(right, t); }

    bool contains(double r, double t) const {
        if (t < 0 || t > T) return false;
        const double t_data = std::min(left.pts.back().t, right.pts.back().t);
        if (t > t_data) return false;
        return r_left(t) <= r && r <= r_right(t);
    }

  private:
    static double interp(const char_path& p, double t) {
        const auto& v = p.pts;
        if (t <= v.front().t) return v.front().r;
        if (t >= v.back().t) return v.back().r;
        const double dt = p.record_dt;
        const size_t i =
            std::min(v.size() - 2, size_t((t - v.front().t) / dt));
        const double s = (t - v[i].t) / (v[i + 1].t - v[i].t);
        return v[i].r + s * (v[i + 1].r - v[i].r);
    }

    friend omega_region build_omega(const space_time_field&, const gas_params&, double,
                                    double, double, double, double, double);
};

/// Builds the trusted region from the two boundary characteristics, finding
/// the closing time by sign change + bisection on the interpolated gap.
inline omega_region build_omega(const space_time_field& F, const gas_params& p,
                                double r1, double r2, double T_tilde, double t_cap,
                                double record_dt, double rel_tol = 1e-8) {
    if (!(r1 < r2)) throw input_error("build_omega: need r1 < r2");
    omega_region om;
    om.r1 = r1;
    om.r2 = r2;
    om.T_tilde = T_tilde;
    const double t_stop = std::min(t_cap, F.t_back());
    om.t_cap = t_stop;

    trace_controls tc;
    tc.rel_tol = rel_tol;
    tc.record_dt = record_dt;
    om.left = trace_path(F, p, 2, r1, 0.0, t_stop, tc);
    om.right = trace_path(F, p, 1, r2, 0.0, t_stop, tc);
    om.truncated = om.left.termination == path_stop::left_hull ||
                   om.right.termination == path_stop::left_hull;

    const double t_data = std::min(om.left.pts.back().t, om.right.pts.back().t);
    auto gap = [&](double t) { return om.r_right(t) - om.r_left(t); };
    // scan the ladder for a sign change of the gap
    const size_t nscan = size_t(t_data / record_dt) + 1;
    double t_lo = 0, t_hi = -1;
    for (size_t k = 1; k <= nscan; ++k) {
        const double tk = std::min(double(k) * record_dt, t_data);
        if (gap(tk) <= 0) {
            t_lo = double(k - 1) * record_dt;
            t_hi = tk;
            break;
        }
    }
    if (t_hi > 0) {
        while ((t_hi - t_lo) > 1e-10 * std::max(t_hi, 1e-300)) {
            const double mid = (t_lo + t_hi) / 2;
            (gap(mid) > 0 ? t_lo : t_hi) = mid;
        }
        om.t_m = (t_lo + t_hi) / 2;
        om.t_m_observed = true;
    }

    om.T = T_tilde;
    om.binding = "T_tilde";
    if (om.t_m_observed && om.t_m < om.T) {
        om.T = om.t_m;
        om.binding = "t_m";
    }
    if (t_stop < om.T) {
        om.T = t_stop;
        om.binding = "t_cap";
    }
    return om;
}

}  // namespace inwave
