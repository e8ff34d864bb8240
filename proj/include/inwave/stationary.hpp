#pragma once

// Steady radial flow oracle: states (h, u)(r) on the supersonic branch of
//   r^m rho(h) u = C1          (mass flux)
//   u^2/2 + h^2/(g-1) = C2     (Bernoulli)
// solved per radius by bisection.  On the supersonic branch the Bernoulli
// residual is strictly decreasing in h, so the root is unique; losing the
// branch (sonic state inside the interval) raises a structured error naming
// the radius.

#include <cmath>
#include <string>
#include <vector>

#include "inwave/errors.hpp"
#include "inwave/field.hpp"
#include "inwave/gas.hpp"

namespace inwave {

struct stationary_profile {
    gas_params params;
    double C1 = 0;  // r^m rho u
    double C2 = 0;  // u^2/2 + h^2/(gamma-1)

    point_state at(double r) const {
        if (!(r > 0)) throw input_error("stationary: radius must be positive");
        const double g = params.gamma;
        const double h_sonic = std::sqrt(2 * C2 * (g - 1) / (g + 1));
        auto residual = [&](double h) {
            const double rho = density_from_sound_speed(h, params);
            const double u = C1 / (std::pow(r, double(params.m)) * rho);
            return u * u / 2 + h * h / (g - 1) - C2;
        };
        if (!(residual(h_sonic) < 0))
            throw sonic_error("stationary: supersonic branch lost at r = " +
                              std::to_string(r) + " (sonic state reached)");
        double lo = 1e-12 * h_sonic, hi = h_sonic;
        // residual(lo) > 0 > residual(hi); bisect to machine precision
        for (int it = 0; it < 200 && (hi - lo) > 1e-16 * h_sonic; ++it) {
            const double mid = (lo + hi) / 2;
            (residual(mid) > 0 ? lo : hi) = mid;
        }
        const double h = (lo + hi) / 2;
        const double u = C1 / (std::pow(r, double(params.m)) *
                               density_from_sound_speed(h, params));
        return {r, h, u};
    }

    /// Relative defects of both invariants for a candidate state.
    double mass_flux_residual(double r, double h, double u) const {
        const double f = std::pow(r, double(params.m)) *
                         density_from_sound_speed(h, params) * u;
        return std::fabs(f - C1) / std::fabs(C1);
    }
    double bernoulli_residual(double h, double u) const {
        return std::fabs(u * u / 2 + h * h / (params.gamma - 1) - C2) / std::fabs(C2);
    }

    /// Tabulates the profile on a grid.
    void tabulate(const grid& g, std::vector<double>& h, std::vector<double>& u) const {
        h.resize(g.n);
        u.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            const auto s = at(g.r(i));
            h[i] = s.h;
            u[i] = s.u;
        }
    }
};

/// Anchors the branch constants at one supersonic inward state.
inline stationary_profile make_stationary(const gas_params& p, double r_anchor,
                                          double h_anchor, double u_anchor) {
    if (!(r_anchor > 0) || !(h_anchor > 0))
        throw input_error("stationary: anchor needs r > 0 and h > 0");
    if (!(u_anchor < -h_anchor))
        throw input_error("stationary: anchor must be supersonic inward (u < -h < 0)");
    stationary_profile sp;
    sp.params = p;
    sp.C1 = std::pow(r_anchor, double(p.m)) *
            density_from_sound_speed(h_anchor, p) * u_anchor;
    sp.C2 = u_anchor * u_anchor / 2 + h_anchor * h_anchor / (p.gamma - 1);
    return sp;
}

}  // namespace inwave
