#pragma once

// Pointwise state kernel for radially symmetric isentropic gas dynamics.
//
// Working variables are the sound speed h > 0 and radial velocity u at
// radius r > 0; the gas law is p = K rho^gamma.  Wave speeds are
// c1 = u - h and c2 = u + h.  The gradient combinations alpha and beta
// diagonalize the smooth equations along the two wave families; their
// weighted forms alpha_t = h^lambda alpha, beta_t = h^lambda beta obey
// self-contained Riccati equations.
//
// Everything here is a pure function of its arguments.  Functions that
// divide by c1 or c2 take an explicit relative sonic guard and throw
// sonic_error inside the guarded band.  Rational-safe operations (no
// fractional powers) are templated so they can be instantiated with
// extended-precision or exact rational scalar types.

#include <cmath>
#include <string>

#include "inwave/errors.hpp"

namespace inwave {

/// Relative guard band around c1 = 0 or c2 = 0; see guard_nonsonic.
inline constexpr double default_sonic_eps = 1e-10;

template <class Real>
struct gas_params_t {
    Real gamma;  // adiabatic exponent, > 1
    Real K;      // pressure scale, > 0
    int m;       // symmetry exponent: 1 cylindrical, 2 spherical

    /// Exponent of the gradient weight h^lambda; zero at gamma == 3.
    Real lambda() const { return (gamma - 3) / (2 * (gamma - 1)); }
};

using gas_params = gas_params_t<double>;

template <class Real>
gas_params_t<Real> make_gas_params(Real gamma, Real K, int m) {
    if (!(gamma > 1))
        throw input_error("gas_params: gamma must exceed 1");
    if (!(K > 0))
        throw input_error("gas_params: K must be positive");
    if (m < 1)
        throw input_error("gas_params: symmetry exponent m must be >= 1");
    return gas_params_t<Real>{gamma, K, m};
}

template <class Real>
struct point_state_t {
    Real r;  // radius, > 0
    Real h;  // sound speed, > 0
    Real u;  // radial velocity (negative for inward flow)
};

using point_state = point_state_t<double>;

template <class Real>
void require_valid(const point_state_t<Real>& s) {
    if (!(s.r > 0))
        throw input_error("point_state: radius must be positive");
    if (!(s.h > 0))
        throw vacuum_error("point_state: sound speed must be positive");
}

template <class Real>
Real abs_val(const Real& x) {
    return x < Real(0) ? Real(-x) : Real(x);
}

/// Throws sonic_error when |c1| or |c2| falls below eps * (|u| + h).
template <class Real>
void guard_nonsonic(const point_state_t<Real>& s, Real eps = Real(default_sonic_eps)) {
    const Real scale = abs_val(s.u) + s.h;
    if (abs_val<Real>(s.u - s.h) <= eps * scale || abs_val<Real>(s.u + s.h) <= eps * scale)
        throw sonic_error("wave speed within sonic guard band at r = " +
                          std::to_string(double(s.r)));
}

// ---------------------------------------------------------------------------
// Thermodynamic closure (floating-point scalar types only: fractional powers)
// ---------------------------------------------------------------------------

template <class Real>
Real sound_speed(Real rho, const gas_params_t<Real>& p) {
    using std::pow;
    using std::sqrt;
    if (!(rho > 0))
        throw input_error("sound_speed: density must be positive");
    return sqrt(p.K * p.gamma) * pow(rho, (p.gamma - 1) / 2);
}

template <class Real>
Real density_from_sound_speed(Real h, const gas_params_t<Real>& p) {
    using std::pow;
    if (!(h > 0))
        throw vacuum_error("density_from_sound_speed: h must be positive");
    return pow(h * h / (p.K * p.gamma), 1 / (p.gamma - 1));
}

// ---------------------------------------------------------------------------
// Wave speeds and Riemann variables
// ---------------------------------------------------------------------------

template <class Real>
struct char_speeds_t {
    Real c1;  // u - h, the inward-fast family in the supersonic inward regime
    Real c2;  // u + h
};

template <class Real>
char_speeds_t<Real> char_speeds(const point_state_t<Real>& s) {
    require_valid(s);
    return {s.u - s.h, s.u + s.h};
}

template <class Real>
struct riemann_vars_t {
    Real w;  // u + 2 h / (gamma - 1), constant along family 2 when m = 0
    Real z;  // u - 2 h / (gamma - 1), constant along family 1 when m = 0
};

template <class Real>
riemann_vars_t<Real> riemann_invariants(const point_state_t<Real>& s,
                                        const gas_params_t<Real>& p) {
    require_valid(s);
    const Real k = 2 / (p.gamma - 1);
    return {s.u + k * s.h, s.u - k * s.h};
}

template <class Real>
point_state_t<Real> state_from_riemann(Real r, const riemann_vars_t<Real>& rv,
                                       const gas_params_t<Real>& p) {
    if (!(rv.w > rv.z))
        throw vacuum_error("state_from_riemann: w must exceed z");
    point_state_t<Real> s{r, (p.gamma - 1) * (rv.w - rv.z) / 4, (rv.w + rv.z) / 2};
    require_valid(s);
    return s;
}

// ---------------------------------------------------------------------------
// Gradient variables (rational-safe)
// ---------------------------------------------------------------------------

template <class Real>
struct grad_pair_t {
    Real alpha;  // w_r + m h u / (r c2)
    Real beta;   // z_r - m h u / (r c1)
};

template <class Real>
grad_pair_t<Real> alpha_beta(const point_state_t<Real>& s, Real u_r, Real h_r,
                             const gas_params_t<Real>& p,
                             Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real c1 = s.u - s.h, c2 = s.u + s.h;
    const Real k = 2 / (p.gamma - 1);
    const Real src = p.m * s.h * s.u / s.r;
    return {u_r + k * h_r + src / c2, u_r - k * h_r - src / c1};
}

template <class Real>
struct prim_grads_t {
    Real u_r;
    Real h_r;
};

template <class Real>
prim_grads_t<Real> invert_gradients(const point_state_t<Real>& s, Real alpha, Real beta,
                                    const gas_params_t<Real>& p,
                                    Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real c1 = s.u - s.h, c2 = s.u + s.h;
    const Real q = p.m * s.u / (s.r * c1 * c2);
    const Real h_r = (p.gamma - 1) / 4 * (alpha - beta - 2 * q * s.u * s.h);
    const Real u_r = (alpha + beta) / 2 + q * s.h * s.h;
    return {u_r, h_r};
}

/// Time derivatives of the smooth equations given spatial gradients.
template <class Real>
struct prim_time_derivs_t {
    Real h_t;
    Real u_t;
};

template <class Real>
prim_time_derivs_t<Real> primitive_time_derivs(const point_state_t<Real>& s, Real u_r,
                                               Real h_r, const gas_params_t<Real>& p) {
    require_valid(s);
    const Real gm = (p.gamma - 1) / 2;
    return {-s.u * h_r - gm * s.h * u_r - gm * p.m * s.u * s.h / s.r,
            -s.u * u_r - (2 / (p.gamma - 1)) * s.h * h_r};
}

// ---------------------------------------------------------------------------
// Gradient weight h^lambda (floating-point only)
// ---------------------------------------------------------------------------

template <class Real>
Real weight_tilde(Real value, Real h, const gas_params_t<Real>& p) {
    using std::pow;
    if (!(h > 0))
        throw vacuum_error("weight_tilde: h must be positive");
    return pow(h, p.lambda()) * value;
}

template <class Real>
Real unweight_tilde(Real value, Real h, const gas_params_t<Real>& p) {
    using std::pow;
    if (!(h > 0))
        throw vacuum_error("unweight_tilde: h must be positive");
    return pow(h, -p.lambda()) * value;
}

// ---------------------------------------------------------------------------
// Riccati structure along characteristics (rational-safe except _tilde)
// ---------------------------------------------------------------------------

template <class Real>
struct riccati_coeffs_t {
    Real A1;  // coefficient of alpha in the d1(beta) equation
    Real A2;  // coefficient of beta in the d2(alpha) equation
    Real B1;  // damping of beta in the d1(beta) equation
    Real B2;  // damping of alpha in the d2(alpha) equation
};

template <class Real>
riccati_coeffs_t<Real> riccati_coeffs(const point_state_t<Real>& s,
                                      const gas_params_t<Real>& p,
                                      Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real g = p.gamma, u = s.u, h = s.h, r = s.r;
    const Real c1 = u - h, c2 = u + h;
    const Real disc = (g - 1) / 2 * u * u - h * h;
    const Real A1 = p.m * c2 / (2 * r * c1 * c1) * disc;
    const Real A2 = p.m * c1 / (2 * r * c2 * c2) * disc;
    const Real B1 = p.m / (r * c1 * c1) *
                    ((g - 1) / 4 * u * u * u - h * h * h / 2 - (g - 1) / 4 * u * u * h +
                     u * h * h / 2 + (h * u * c1 / c2) * (h + (g - 1) / 2 * u));
    const Real B2 = p.m / (r * c2 * c2) *
                    ((g - 1) / 4 * u * u * u + h * h * h / 2 + (g - 1) / 4 * u * u * h +
                     u * h * h / 2 + (h * u * c2 / c1) * (h - (g - 1) / 2 * u));
    return {A1, A2, B1, B2};
}

template <class Real>
struct riccati_rhs_t {
    Real d1_beta;   // growth rate of beta along family 1
    Real d2_alpha;  // growth rate of alpha along family 2
};

/// Four-coefficient form of the gradient equations.
template <class Real>
riccati_rhs_t<Real> riccati_rhs_lemma(const point_state_t<Real>& s, Real alpha, Real beta,
                                      const gas_params_t<Real>& p,
                                      Real eps = Real(default_sonic_eps)) {
    const riccati_coeffs_t<Real> c = riccati_coeffs(s, p, eps);
    const Real g = p.gamma;
    const Real quad = -(1 + g) / 4;
    const Real cross = -(3 - g) / 4;
    return {quad * beta * beta + cross * alpha * beta + c.A1 * alpha - c.B1 * beta,
            quad * alpha * alpha + cross * alpha * beta + c.A2 * beta - c.B2 * alpha};
}

/// Reduced form with the damping collapsed to (gamma-3) u^2 h^2 terms.
template <class Real>
riccati_rhs_t<Real> riccati_rhs_simplified(const point_state_t<Real>& s, Real alpha,
                                           Real beta, const gas_params_t<Real>& p,
                                           Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real g = p.gamma, u = s.u, h = s.h, r = s.r;
    const Real c1 = u - h, c2 = u + h;
    const riccati_coeffs_t<Real> c = riccati_coeffs(s, p, eps);
    const Real uh2 = u * u * h * h;
    const Real d1 = -(g + 1) / 4 * beta * beta + (g - 3) / 4 * alpha * beta +
                    c.A1 * (alpha - beta) + (g - 3) * p.m / r * (uh2 / (c1 * c1 * c2)) * beta;
    const Real d2 = -(g + 1) / 4 * alpha * alpha + (g - 3) / 4 * alpha * beta +
                    c.A2 * (beta - alpha) + (g - 3) * p.m / r * (uh2 / (c2 * c2 * c1)) * alpha;
    return {d1, d2};
}

template <class Real>
struct tilde_rhs_t {
    Real d1_beta_t;   // growth rate of beta_t = h^lambda beta along family 1
    Real d2_alpha_t;  // growth rate of alpha_t = h^lambda alpha along family 2
};

/// Self-contained equations for the weighted gradients.
template <class Real>
tilde_rhs_t<Real> riccati_rhs_tilde(const point_state_t<Real>& s, Real alpha_t,
                                    Real beta_t, const gas_params_t<Real>& p,
                                    Real eps = Real(default_sonic_eps)) {
    using std::pow;
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real g = p.gamma, u = s.u, h = s.h, r = s.r;
    const Real c1 = u - h, c2 = u + h;
    const riccati_coeffs_t<Real> c = riccati_coeffs(s, p, eps);
    const Real hml = pow(h, -p.lambda());
    const Real quad = -(g + 1) / 4 * hml;
    const Real damp1 = p.m * ((g - 3) * u * u + c2 * c2) / (2 * r * c1);
    const Real damp2 = p.m * ((g - 3) * u * u + c1 * c1) / (2 * r * c2);
    return {quad * beta_t * beta_t + c.A1 * alpha_t - damp1 * beta_t,
            quad * alpha_t * alpha_t + c.A2 * beta_t - damp2 * alpha_t};
}

// ---------------------------------------------------------------------------
// Directional derivatives of the base state along characteristics
// ---------------------------------------------------------------------------
//
// The unweighted forms are rational-safe; the public weighted entry point
// converts alpha_t back to alpha.  Family-2 analogues follow by the
// u -> -u, c1 <-> -c2 reflection and are verified against primitive
// elimination in the identity suite.

template <class Real>
struct directional_derivs_t {
    Real d1_h;   // rate of h along family 1
    Real d1_u;   // rate of u along family 1
    Real d1_c2;  // rate of the opposite wave speed along family 1
};

template <class Real>
directional_derivs_t<Real> directional_derivs_unweighted(const point_state_t<Real>& s,
                                                         Real alpha,
                                                         const gas_params_t<Real>& p,
                                                         Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real g = p.gamma, u = s.u, h = s.h, r = s.r;
    const Real c2 = u + h;
    const Real d1_h = -(g - 1) / 2 * h * (alpha + p.m * u * u / (r * c2));
    const Real d1_u = -h * (alpha - p.m * u * h / (r * c2));
    const Real d1_c2 =
        -(g + 1) / 2 * h * (alpha + p.m * u * ((g - 1) * u - 2 * h) / ((g + 1) * r * c2));
    return {d1_h, d1_u, d1_c2};
}

template <class Real>
directional_derivs_t<Real> directional_derivs(const point_state_t<Real>& s, Real alpha_t,
                                              const gas_params_t<Real>& p,
                                              Real eps = Real(default_sonic_eps)) {
    return directional_derivs_unweighted(s, unweight_tilde(alpha_t, s.h, p), p, eps);
}

/// Rate of h along family 2; mirror of the d1_h formula.
template <class Real>
Real d2_h_unweighted(const point_state_t<Real>& s, Real beta, const gas_params_t<Real>& p,
                     Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real c1 = s.u - s.h;
    return -(p.gamma - 1) / 2 * s.h * (beta + p.m * s.u * s.u / (s.r * c1));
}

/// Rate of u along family 2; mirror of the d1_u formula.
template <class Real>
Real d2_u_unweighted(const point_state_t<Real>& s, Real beta, const gas_params_t<Real>& p,
                     Real eps = Real(default_sonic_eps)) {
    require_valid(s);
    guard_nonsonic(s, eps);
    const Real c1 = s.u - s.h;
    return s.h * (beta + p.m * s.u * s.h / (s.r * c1));
}

// ---------------------------------------------------------------------------
// Full gradient record used by field diagnostics
// ---------------------------------------------------------------------------

struct gradient_state {
    double u_r = 0;
    double h_r = 0;
    double alpha = 0;
    double beta = 0;
    double alpha_t = 0;
    double beta_t = 0;
};

inline gradient_state make_gradient_state(const point_state& s, double u_r, double h_r,
                                          const gas_params& p,
                                          double eps = default_sonic_eps) {
    const auto ab = alpha_beta(s, u_r, h_r, p, eps);
    gradient_state g;
    g.u_r = u_r;
    g.h_r = h_r;
    g.alpha = ab.alpha;
    g.beta = ab.beta;
    g.alpha_t = weight_tilde(ab.alpha, s.h, p);
    g.beta_t = weight_tilde(ab.beta, s.h, p);
    return g;
}

}  // namespace inwave
