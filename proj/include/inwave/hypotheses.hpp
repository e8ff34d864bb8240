#pragma once

// Admissibility machinery for the focusing-wave certification:
//   - band constants and the derived thresholds (the weighted-gradient floor
//     and cap, the safe horizon, and the blow-up rate N);
//   - a checker that grades initial profiles against every band condition and
//     reports signed margins;
//   - a constructive generator that produces smooth admissible data by
//     prescribing the weighted gradients (mid-band level plus a polynomial
//     mollifier bump at the seed radius) and integrating the inversion
//     formulas in radius, so the gradient targets are met exactly;
//   - the hyperbolic lower-bound curve for -beta_t along the seed
//     characteristic, with its asymptote and the certified window 1/N.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "inwave/errors.hpp"
#include "inwave/field.hpp"
#include "inwave/gas.hpp"
#include "inwave/profile.hpp"

namespace inwave {

struct hypothesis_bands {
    // geometry: 0 < r0 < r1 < r_star < r2
    double r0 = 0, r1 = 0, r2 = 0, r_star = 0;
    // state bands on [r1, r2]: h in (h_lo, h_hi), u in (-u_hi_mag, -u_lo_mag)
    double h_lo = 0, h_hi = 0;
    double u_lo_mag = 0, u_hi_mag = 0;
    // weighted-gradient bands on [r1, r2]
    double alpha_lo = 0, alpha_hi = 0;
    double beta_bar = 0;
};

/// Optional horizon information folded into T = min(T_tilde, t_m, t_cap).
struct horizon_options {
    double t_m = std::numeric_limits<double>::infinity();
    double t_cap = std::numeric_limits<double>::infinity();
};

struct hypothesis_set {
    gas_params gas{};
    hypothesis_bands bands{};
    // derived constants
    double alpha_star_lo = 0;   // floor the alpha band must clear
    double alpha_star_hi = 0;   // invariant-region cap for alpha_t
    double beta_bar_floor = 0;  // strict floor beta_bar must exceed
    double T_tilde = 0;
    double T = 0;
    double N = 0;               // blow-up rate constant (1/time)
    double blowup_window = 0;   // 1/N, always <= T
    std::string T_binding;      // "T_tilde" | "t_m" | "t_cap"
    std::string N_binding;      // "beta_bar" | "inv_T" | "transit"
};

/// Validates orderings and populates every derived constant; any violated
/// condition raises constraint_error naming it.
inline hypothesis_set compute_constants(const gas_params& p, const hypothesis_bands& b,
                                        const horizon_options& ho = {}) {
    if (!(p.gamma > 1) || !(p.K > 0) || (p.m != 1 && p.m != 2))
        throw input_error("compute_constants: invalid gas parameters");
    if (!(p.gamma >= 3))
        throw constraint_error("gamma_range",
                               "compute_constants: the certification requires gamma >= 3");
    auto fail = [](const char* cond, const std::string& msg) {
        throw constraint_error(cond, "compute_constants: " + msg);
    };
    if (!(0 < b.r0 && b.r0 < b.r1 && b.r1 < b.r_star && b.r_star < b.r2))
        fail("radial_ordering", "need 0 < r0 < r1 < r_star < r2");
    if (!(0 < b.h_lo && b.h_lo < b.h_hi))
        fail("h_band", "need 0 < h_lo < h_hi");
    if (!(0 < b.u_lo_mag && b.u_lo_mag < b.u_hi_mag))
        fail("u_band", "need 0 < u_lo_mag < u_hi_mag");
    if (!(b.h_hi < b.u_lo_mag / 2))
        fail("h_below_half_u", "need h_hi < u_lo_mag / 2");
    if (!(0 < b.alpha_lo && b.alpha_lo < b.alpha_hi))
        fail("alpha_band", "need 0 < alpha_lo < alpha_hi");
    if (!(ho.t_m > 0) || !(ho.t_cap > 0))
        throw input_error("compute_constants: horizon values must be positive");

    hypothesis_set hs;
    hs.gas = p;
    hs.bands = b;
    const double lam = p.lambda();
    const double g = p.gamma;

    hs.alpha_star_lo =
        2 * p.m * (b.u_hi_mag + b.h_hi) / b.r0 * std::pow(b.h_hi, lam);
    if (!(b.alpha_lo >= hs.alpha_star_lo))
        fail("alpha_lo_floor", "alpha_lo must be at least " +
                                   std::to_string(hs.alpha_star_lo));
    hs.alpha_star_hi =
        std::pow(b.h_hi / b.h_lo, (g + 1) / (2 * (g - 1))) * b.alpha_hi;
    hs.beta_bar_floor = (g + 1) * b.r2 * b.alpha_lo * b.alpha_lo /
                        (2 * p.m * b.u_hi_mag) * std::pow(b.h_lo, -lam);
    if (!(b.beta_bar > hs.beta_bar_floor))
        fail("beta_bar_floor",
             "beta_bar must exceed " + std::to_string(hs.beta_bar_floor));

    const double escape = (b.r1 - b.r0) / (b.u_hi_mag + 2 * b.h_hi);
    const double growth = 2 / ((g - 1) * hs.alpha_star_hi) * std::pow(b.h_lo, lam);
    hs.T_tilde = std::min(escape, growth);

    hs.T = hs.T_tilde;
    hs.T_binding = "T_tilde";
    if (ho.t_m < hs.T) {
        hs.T = ho.t_m;
        hs.T_binding = "t_m";
    }
    if (ho.t_cap < hs.T) {
        hs.T = ho.t_cap;
        hs.T_binding = "t_cap";
    }

    const double s_beta = b.beta_bar * std::pow(b.h_hi, -lam);
    const double s_horizon = 1 / hs.T;
    const double s_transit = (b.u_hi_mag + 2 * b.h_hi) / (b.r_star - b.r1);
    hs.N = s_beta;
    hs.N_binding = "beta_bar";
    if (s_horizon > hs.N) {
        hs.N = s_horizon;
        hs.N_binding = "inv_T";
    }
    if (s_transit > hs.N) {
        hs.N = s_transit;
        hs.N_binding = "transit";
    }
    hs.blowup_window = 1 / hs.N;
    return hs;
}

// ---------------------------------------------------------------------------
// Initial-data checker
// ---------------------------------------------------------------------------

struct check_record {
    std::string condition;
    bool satisfied = false;
    double margin = 0;  // signed slack; positive means satisfied
    double worst_r = 0;
};

struct check_report {
    std::vector<check_record> records;

    bool pass() const {
        for (const auto& rec : records)
            if (!rec.satisfied) return false;
        return !records.empty();
    }

    const check_record& find(const std::string& condition) const {
        for (const auto& rec : records)
            if (rec.condition == condition) return rec;
        throw input_error("check_report: no record named '" + condition + "'");
    }
};

/// Grades (h0, u0) against every band condition on a dense sample of
/// [r1, r2] plus the seed condition at r_star. The weighted gradients are
/// formed from the full chain-rule expressions; the unit-coefficient display
/// variant is reported alongside as a convention gap (zero at gamma == 3).
inline check_report check_initial_data(const profile& h0, const profile& u0,
                                       const hypothesis_set& hs, int n_samples = 2000) {
    if (n_samples < 8) throw input_error("check_initial_data: too few samples");
    const auto& b = hs.bands;
    const gas_params& p = hs.gas;
    const double lam = p.lambda();

    struct tracker {
        double margin = std::numeric_limits<double>::infinity();
        double worst_r = 0;
        void feed(double m, double r) {
            if (m < margin) {
                margin = m;
                worst_r = r;
            }
        }
    };
    tracker h_band, u_band, supersonic, alpha_band, beta_cap;
    double gap_max = 0, gap_r = b.r1;

    auto eval_tilde = [&](double r, double& at, double& bt, double& at_alt,
                          double& bt_alt) {
        const double hv = h0.value(r), uv = u0.value(r);
        const double hr = h0.deriv(r), ur = u0.deriv(r);
        if (!std::isfinite(hv) || !std::isfinite(uv) || !std::isfinite(hr) ||
            !std::isfinite(ur))
            throw numeric_error("check_initial_data: profile not evaluable at r = " +
                                std::to_string(r));
        const point_state s{r, hv, uv};
        const auto gs = make_gradient_state(s, ur, hr, p);
        at = gs.alpha_t;
        bt = gs.beta_t;
        const double w = std::pow(hv, lam);
        const double src = p.m * hv * uv / r;
        at_alt = (ur + hr + src / (uv + hv)) * w;
        bt_alt = (ur - hr - src / (uv - hv)) * w;
        return s;
    };

    for (int i = 0; i <= n_samples; ++i) {
        const double r = b.r1 + (b.r2 - b.r1) * double(i) / n_samples;
        double at, bt, at_alt, bt_alt;
        const point_state s = eval_tilde(r, at, bt, at_alt, bt_alt);
        h_band.feed(std::min(s.h - b.h_lo, b.h_hi - s.h), r);
        u_band.feed(std::min(s.u + b.u_hi_mag, -b.u_lo_mag - s.u), r);
        supersonic.feed(-(s.u + s.h), r);
        alpha_band.feed(std::min(at - b.alpha_lo, b.alpha_hi - at), r);
        beta_cap.feed(-b.beta_bar - bt, r);
        const double gap = std::max(std::fabs(at - at_alt), std::fabs(bt - bt_alt));
        if (gap > gap_max) {
            gap_max = gap;
            gap_r = r;
        }
    }
    double at_s, bt_s, at_alt_s, bt_alt_s;
    eval_tilde(b.r_star, at_s, bt_s, at_alt_s, bt_alt_s);

    check_report rep;
    auto push = [&](const char* id, const tracker& t) {
        rep.records.push_back({id, t.margin > 0, t.margin, t.worst_r});
    };
    push("h_band", h_band);
    push("u_band", u_band);
    push("supersonic", supersonic);
    push("alpha_band", alpha_band);
    push("beta_cap", beta_cap);
    // non-strict condition: tolerate round-off on the exact boundary -N
    const double seed_margin = -hs.N - bt_s;
    const double seed_tol = 1e-9 * std::max(1.0, hs.N);
    rep.records.push_back({"seed", seed_margin >= -seed_tol, seed_margin, b.r_star});
    rep.records.push_back({"tilde_convention_gap", true, gap_max, gap_r});
    return rep;
}

// ---------------------------------------------------------------------------
// Constructive generator
// ---------------------------------------------------------------------------

struct bump_spec {
    double center = std::numeric_limits<double>::quiet_NaN();  // default r_star
    double width = 0;  // support half-width; support must sit inside (r1, r2)
    int order = 8;     // mollifier (1 - x^2)^order
    double target = std::numeric_limits<double>::quiet_NaN();  // default -N
};

struct generator_options {
    double alpha_level = std::numeric_limits<double>::quiet_NaN();  // default mid-band
    double beta_level = std::numeric_limits<double>::quiet_NaN();   // default -1.05 beta_bar
    double h_anchor = std::numeric_limits<double>::quiet_NaN();     // h0(r1)
    double u_anchor = std::numeric_limits<double>::quiet_NaN();     // u0(r1)
    double taper_width = std::numeric_limits<double>::quiet_NaN();  // default 2 (r2 - r1)
    double pad = 0;               // steady extension beyond the tapers
    int max_grid_points = 10000;  // resolvability ceiling for the bump pre-check
    int min_cells_per_width = 12;
    int check_samples = 2000;
};

struct generated_data {
    profile h0, u0;
    double r_lo = 0, r_hi = 0;  // domain of definition
    double seed_target = 0;     // requested beta_t at r_star
    double delta_beta = 0;      // bump depth in weighted-gradient space
    check_report report;        // post-validation outcome (always passing)
};

namespace detail {

/// integral of (1 - x^2)^k over [-1, 1]
inline double mollifier_mass(int k) {
    double v = 2;
    for (int j = 1; j <= k; ++j) v *= double(2 * j) / double(2 * j + 1);
    return v;
}

struct gradient_recipe {
    double r1, r2, taper_width;
    double alpha_level, beta_level;
    double center, width, delta_beta;
    int order;

    double taper(double r) const {
        if (r >= r1 && r <= r2) return 1;
        if (r > r1 - taper_width && r < r1)
            return smoothstep5((r - (r1 - taper_width)) / taper_width);
        if (r > r2 && r < r2 + taper_width)
            return smoothstep5(((r2 + taper_width) - r) / taper_width);
        return 0;
    }

    double mollifier(double r) const {
        const double x = (r - center) / width;
        if (std::fabs(x) >= 1) return 0;
        return std::pow(1 - x * x, order);
    }

    double alpha_t(double r) const { return alpha_level * taper(r); }
    double beta_t(double r) const {
        return beta_level * taper(r) + delta_beta * mollifier(r);
    }
};

struct generated_table {
    gas_params gas;
    gradient_recipe recipe;
    double r_lo = 0, dr = 0;
    std::vector<double> h, u, h_r, u_r;

    prim_grads_t<double> slopes(double r, double hv, double uv) const {
        if (!(hv > 1e-12))
            throw infeasible_error("vacuum_in_construction",
                                   "generator: h reached zero near r = " +
                                       std::to_string(r));
        const point_state s{r, hv, uv};
        const double w = std::pow(hv, -gas.lambda());
        try {
            return invert_gradients(s, recipe.alpha_t(r) * w, recipe.beta_t(r) * w,
                                    gas);
        } catch (const sonic_error&) {
            throw infeasible_error("sonic_in_construction",
                                   "generator: flow turned sonic near r = " +
                                       std::to_string(r));
        }
    }

    hermite_eval eval(double r, const std::vector<double>& f,
                      const std::vector<double>& d) const {
        const auto n = long(f.size());
        if (r < r_lo - 1e-12 || r > r_lo + dr * double(n - 1) + 1e-12)
            throw input_error("generated profile queried outside [" +
                              std::to_string(r_lo) + ", " +
                              std::to_string(r_lo + dr * double(n - 1)) + "]");
        long i = long((r - r_lo) / dr);
        i = std::clamp(i, 0L, n - 2);
        return hermite(f[size_t(i)], f[size_t(i + 1)], d[size_t(i)], d[size_t(i + 1)],
                       dr, r - (r_lo + dr * double(i)));
    }

    double h_at(double r) const { return eval(r, h, h_r).value; }
    double u_at(double r) const { return eval(r, u, u_r).value; }
};

}  // namespace detail

/// Builds admissible data: the weighted gradients are prescribed exactly
/// (mid-band alpha level, beta level below the cap, mollifier bump of depth
/// delta_beta at the seed), the state follows by integrating the inversion
/// formulas from the anchor at r1, and the gradient targets taper to zero
/// outside [r1, r2] so the pads carry near-steady flow. Derivatives of the
/// returned profiles are computed from the prescription, not by numerical
/// differentiation.
inline generated_data generate_initial_data(const hypothesis_set& hs,
                                            const bump_spec& bs_in = {},
                                            const generator_options& go_in = {}) {
    const auto& b = hs.bands;
    const gas_params& p = hs.gas;
    const double lam = p.lambda();

    bump_spec bs = bs_in;
    if (std::isnan(bs.center)) bs.center = b.r_star;
    if (!(bs.width > 0))
        throw infeasible_error("bump_width", "generator: bump width must be positive");
    if (bs.order < 2) throw input_error("generator: mollifier order must be >= 2");

    generator_options go = go_in;
    if (std::isnan(go.alpha_level)) go.alpha_level = (b.alpha_lo + b.alpha_hi) / 2;
    if (std::isnan(go.beta_level)) go.beta_level = -1.05 * b.beta_bar;
    if (std::isnan(go.h_anchor)) go.h_anchor = b.h_lo + 0.1 * (b.h_hi - b.h_lo);
    if (std::isnan(go.u_anchor))
        go.u_anchor = -(b.u_lo_mag + 0.15 * (b.u_hi_mag - b.u_lo_mag));
    if (std::isnan(go.taper_width)) go.taper_width = 2 * (b.r2 - b.r1);
    if (!(go.taper_width > 0) || !(go.pad >= 0))
        throw input_error("generator: taper_width must be positive, pad nonnegative");
    if (go.taper_width >= b.r1 - b.r0)
        throw input_error("generator: taper must not reach below r0");
    // if the baseline level already reaches -N the default bump is flat
    if (std::isnan(bs.target)) bs.target = std::min(-hs.N, go.beta_level);

    auto fail = [](const char* cond, const std::string& msg) {
        throw infeasible_error(cond, "generator: " + msg);
    };

    // geometric pre-checks
    if (!(bs.center - bs.width > b.r1 && bs.center + bs.width < b.r2))
        fail("bump_support", "bump support must sit strictly inside (r1, r2)");
    if (!(bs.target <= -hs.N * (1 - 1e-12)))
        fail("seed_target", "requested seed value is above -N = " +
                                std::to_string(-hs.N));
    if (!(go.alpha_level > b.alpha_lo && go.alpha_level < b.alpha_hi))
        fail("alpha_level", "baseline alpha level must sit inside the band");
    if (!(go.beta_level < -b.beta_bar))
        fail("beta_level", "baseline beta level must sit below -beta_bar");
    if (!(go.h_anchor > b.h_lo && go.h_anchor < b.h_hi))
        fail("h_anchor", "anchor h0(r1) must sit inside the band");
    if (!(go.u_anchor > -b.u_hi_mag && go.u_anchor < -b.u_lo_mag))
        fail("u_anchor", "anchor u0(r1) must sit inside the band");

    const double r_lo = b.r1 - go.taper_width - go.pad;
    const double r_hi = b.r2 + go.taper_width + go.pad;
    if (!(r_lo > 0)) throw input_error("generator: pads reach nonpositive radius");
    const double min_width =
        double(go.min_cells_per_width) * (r_hi - r_lo) / double(go.max_grid_points);
    if (bs.width < min_width)
        fail("bump_resolution",
             "bump width " + std::to_string(bs.width) + " needs more than " +
                 std::to_string(go.max_grid_points) +
                 " grid points to resolve (min feasible width " +
                 std::to_string(min_width) + ")");

    // budget pre-checks: slope demands integrated across [r1, r2] + bump
    const double delta_beta = bs.target - go.beta_level;
    if (!(delta_beta <= 0))
        fail("seed_target", "seed target must undercut the baseline beta level");
    const double wfac = std::pow(b.h_lo, -lam);  // max of h^-lambda on the band
    const double mass = detail::mollifier_mass(bs.order) * bs.width;
    const double span = b.r2 - b.r1;
    const double c2_min = b.u_lo_mag - b.h_hi;  // min |c2| on the band
    const double src_h = (p.gamma - 1) / 2 * p.m * b.u_hi_mag * b.u_hi_mag * b.h_hi /
                         (b.r1 * c2_min * b.u_lo_mag);
    const double src_u = p.m * b.u_hi_mag * b.h_hi * b.h_hi /
                         (b.r1 * c2_min * b.u_lo_mag);
    const double src_a = p.m * b.u_hi_mag * b.h_hi / (b.r1 * c2_min);

    // necessary condition: the alpha floor alone must fit the band capacity
    const double ramp_demand = b.alpha_lo * std::pow(b.h_hi, -lam) * span;
    const double ramp_capacity = (b.u_hi_mag - b.u_lo_mag) +
                                 2 / (p.gamma - 1) * (b.h_hi - b.h_lo) + src_a * span;
    if (ramp_demand > ramp_capacity)
        fail("ramp_budget", "alpha_lo * (r2 - r1) = " + std::to_string(ramp_demand) +
                                " exceeds the band capacity " +
                                std::to_string(ramp_capacity));

    const double dh_up =
        (p.gamma - 1) / 4 * wfac *
            ((go.alpha_level - go.beta_level) * span - delta_beta * mass) +
        src_h * span;
    if (dh_up >= b.h_hi - go.h_anchor)
        fail("h_band_budget", "required h rise " + std::to_string(dh_up) +
                                  " exceeds the headroom " +
                                  std::to_string(b.h_hi - go.h_anchor));
    if (src_h * span >= go.h_anchor - b.h_lo)
        fail("h_band_budget", "source-driven h drop exceeds the lower headroom");
    const double level_sum = go.alpha_level + go.beta_level;
    const double du_down =
        0.5 * wfac * (std::max(0.0, -level_sum) * span - delta_beta * mass) +
        src_u * span;
    if (du_down >= go.u_anchor + b.u_hi_mag)
        fail("u_band_budget", "required u drop " + std::to_string(du_down) +
                                  " exceeds the headroom " +
                                  std::to_string(go.u_anchor + b.u_hi_mag));
    const double du_up = 0.5 * wfac * std::max(0.0, level_sum) * span + src_u * span;
    if (du_up >= -b.u_lo_mag - go.u_anchor)
        fail("u_band_budget", "required u rise " + std::to_string(du_up) +
                                  " exceeds the headroom " +
                                  std::to_string(-b.u_lo_mag - go.u_anchor));

    // dense integration of the inversion ODE from the anchor at r1
    auto table = std::make_shared<detail::generated_table>();
    table->gas = p;
    table->recipe = {b.r1,      b.r2,     go.taper_width, go.alpha_level,
                     go.beta_level, bs.center, bs.width,       delta_beta,
                     bs.order};
    const double ds_target =
        std::min({bs.width / 24, go.taper_width / 64, span / 64});
    const long n_cells = std::max(64L, long(std::ceil((r_hi - r_lo) / ds_target)));
    if (n_cells > 4'000'000)
        fail("table_size", "dense table would need " + std::to_string(n_cells) +
                               " cells; widen the bump or shrink the pads");
    const double ds = (r_hi - r_lo) / double(n_cells);
    const long i1 = std::lround((b.r1 - r_lo) / ds);

    table->r_lo = r_lo;
    table->dr = ds;
    table->h.assign(size_t(n_cells) + 1, 0);
    table->u.assign(size_t(n_cells) + 1, 0);
    table->h_r.assign(size_t(n_cells) + 1, 0);
    table->u_r.assign(size_t(n_cells) + 1, 0);

    auto rk4_step = [&](double r, double& hv, double& uv, double step) {
        const auto k1 = table->slopes(r, hv, uv);
        const auto k2 = table->slopes(r + step / 2, hv + step / 2 * k1.h_r,
                                      uv + step / 2 * k1.u_r);
        const auto k3 = table->slopes(r + step / 2, hv + step / 2 * k2.h_r,
                                      uv + step / 2 * k2.u_r);
        const auto k4 = table->slopes(r + step, hv + step * k3.h_r, uv + step * k3.u_r);
        hv += step / 6 * (k1.h_r + 2 * k2.h_r + 2 * k3.h_r + k4.h_r);
        uv += step / 6 * (k1.u_r + 2 * k2.u_r + 2 * k3.u_r + k4.u_r);
    };

    auto fill = [&](long i) {
        const double r = r_lo + ds * double(i);
        const auto sl = table->slopes(r, table->h[size_t(i)], table->u[size_t(i)]);
        table->h_r[size_t(i)] = sl.h_r;
        table->u_r[size_t(i)] = sl.u_r;
    };

    // anchor sits on a node by construction of i1 (r1 - r_lo is a multiple of
    // ds up to rounding; land the anchor exactly)
    const double r_anchor = r_lo + ds * double(i1);
    double hv = go.h_anchor, uv = go.u_anchor;
    if (std::fabs(r_anchor - b.r1) > 1e-9 * std::max(1.0, b.r1))
        rk4_step(b.r1, hv, uv, r_anchor - b.r1);
    table->h[size_t(i1)] = hv;
    table->u[size_t(i1)] = uv;
    fill(i1);
    for (long i = i1; i < n_cells; ++i) {
        double hh = table->h[size_t(i)], uu = table->u[size_t(i)];
        rk4_step(r_lo + ds * double(i), hh, uu, ds);
        table->h[size_t(i + 1)] = hh;
        table->u[size_t(i + 1)] = uu;
        fill(i + 1);
    }
    for (long i = i1; i > 0; --i) {
        double hh = table->h[size_t(i)], uu = table->u[size_t(i)];
        rk4_step(r_lo + ds * double(i), hh, uu, -ds);
        table->h[size_t(i - 1)] = hh;
        table->u[size_t(i - 1)] = uu;
        fill(i - 1);
    }

    generated_data out;
    out.r_lo = r_lo;
    out.r_hi = r_hi;
    out.seed_target = bs.target;
    out.delta_beta = delta_beta;
    // values come from the dense table; derivatives are recomputed exactly
    // from the prescription at the interpolated state
    out.h0.value = [table](double r) { return table->h_at(r); };
    out.h0.deriv = [table](double r) {
        return table->slopes(r, table->h_at(r), table->u_at(r)).h_r;
    };
    out.u0.value = [table](double r) { return table->u_at(r); };
    out.u0.deriv = [table](double r) {
        return table->slopes(r, table->h_at(r), table->u_at(r)).u_r;
    };

    out.report = check_initial_data(out.h0, out.u0, hs, go.check_samples);
    for (const auto& rec : out.report.records)
        if (!rec.satisfied)
            throw infeasible_error(
                "post_validation",
                "generator: condition '" + rec.condition + "' failed with margin " +
                    std::to_string(rec.margin) + " at r = " +
                    std::to_string(rec.worst_r));
    return out;
}

// ---------------------------------------------------------------------------
// Blow-up lower bound
// ---------------------------------------------------------------------------

struct bound_curve {
    std::vector<double> t;
    std::vector<double> bound;  // hyperbolic lower bound for -beta_t
    double t_b = 0;             // vertical asymptote of the bound
    double window = 0;          // certified blow-up window 1/N
};

/// Lower bound -beta_t(seed path, t) >= -beta0 / (1 + beta0 h_hi^-lambda t),
/// valid while the solution stays smooth. When beta0 satisfies the seed
/// condition, the asymptote must not exceed the certified window.
inline bound_curve blowup_bound_curve(double beta0_star, const hypothesis_set& hs,
                                      const std::vector<double>& t_grid) {
    if (!(beta0_star < 0))
        throw input_error("blowup_bound_curve: seed value must be negative");
    const double hl = std::pow(hs.bands.h_hi, -hs.gas.lambda());
    bound_curve c;
    c.t_b = 1 / (-beta0_star * hl);
    c.window = hs.blowup_window;
    if (beta0_star <= -hs.N && c.t_b > c.window * (1 + 1e-12))
        throw constraint_error(
            "blowup_window",
            "blowup_bound_curve: asymptote " + std::to_string(c.t_b) +
                " exceeds the window " + std::to_string(c.window) +
                " (h_hi^lambda > 1 undermines the window claim)");
    c.t.reserve(t_grid.size());
    c.bound.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t >= 0)) throw input_error("blowup_bound_curve: times must be >= 0");
        c.t.push_back(t);
        c.bound.push_back(t < c.t_b
                              ? -beta0_star / (1 + beta0_star * hl * t)
                              : std::numeric_limits<double>::infinity());
    }
    return c;
}

}  // namespace inwave
