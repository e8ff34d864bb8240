#pragma once

// A smooth radial profile carrying its exact derivative, so downstream
// checks never rely on numerical differentiation of initial data.

#include <functional>
#include <utility>

#include "inwave/errors.hpp"

namespace inwave {

struct profile {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

/// Quintic smoothstep: C^2 monotone ramp from 0 at s=0 to 1 at s=1.
inline double smoothstep5(double s) {
    if (s <= 0) return 0;
    if (s >= 1) return 1;
    return s * s * s * (10 + s * (-15 + 6 * s));
}

/// Integral of (1 - smoothstep5) from 0 to x, clamped beyond x = w.
inline double relax_integral(double x, double w) {
    if (x <= 0) return 0;
    if (x >= w) return w / 2;
    const double s = x / w;
    // int_0^s (1 - q) with q = 10 s^3 - 15 s^4 + 6 s^5
    const double I = s - (2.5 * s * s * s * s - 3.0 * s * s * s * s * s +
                          s * s * s * s * s * s);
    return w * I;
}

/// Extends f beyond [a, b] by relaxing its derivative to zero over width w
/// on each side; C^2 everywhere when f is C^2 with vanishing curvature at a, b.
inline profile blend_to_constant(const profile& f, double a, double b, double w) {
    if (!(a < b) || !(w > 0)) throw input_error("blend_to_constant: need a < b, w > 0");
    const double fa = f.value(a), da = f.deriv(a);
    const double fb = f.value(b), db = f.deriv(b);
    auto val = [=, fv = f.value](double r) {
        if (r < a) return fa - da * relax_integral(a - r, w);
        if (r > b) return fb + db * relax_integral(r - b, w);
        return fv(r);
    };
    auto der = [=, fd = f.deriv](double r) {
        if (r < a) return da * (1 - smoothstep5((a - r) / w));
        if (r > b) return db * (1 - smoothstep5((r - b) / w));
        return fd(r);
    };
    return {std::move(val), std::move(der)};
}

}  // namespace inwave
