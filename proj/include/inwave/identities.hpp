#pragma once

// Randomized verification of the algebraic identities that connect the
// different forms of the characteristic gradient equations:
//
//   * the two polynomial chains that collapse the damping coefficients
//     B1, B2 to (gamma-3) u^2 h^2 corrections of A1, A2,
//   * equality of the four-coefficient and reduced Riccati right sides,
//   * the chain rule connecting the weighted equations to the unweighted
//     ones through the h^lambda factor,
//   * the directional derivative formulas against direct elimination of
//     the primitive time derivatives.
//
// Residuals are normalized by the largest intermediate term magnitude so
// catastrophic cancellation cannot mask a wrong formula.  Samplers run in
// extended precision (long double).  The residual evaluators are templated;
// with an exact rational scalar type every rational identity here is exact.

#include <algorithm>
#include <initializer_list>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "inwave/gas.hpp"

namespace inwave {

struct sample_spec {
    std::uint64_t seed = 20260815;
    int samples = 10000;
    double gamma_min = 3.0;
    double gamma_max = 7.0;
    double gamma_exact3_fraction = 0.25;  // fraction of draws pinned at gamma == 3
    double h_log10_min = -2.0;
    double h_log10_max = 2.0;
    double u_abs_max = 10.0;
    double r_min = 0.1;
    double r_max = 10.0;
    double grad_abs_max = 10.0;   // range for alpha, beta draws
    double sonic_reject = 1e-3;   // discard samples this close to c1 = 0 or c2 = 0
};

struct identity_report {
    std::string id;
    int samples = 0;
    double max_residual = 0;  // normalized
    double tolerance = 0;
    bool pass = false;
    // sample attaining max_residual
    double worst_gamma = 0;
    int worst_m = 0;
    double worst_r = 0;
    double worst_u = 0;
    double worst_h = 0;
};

namespace detail {

/// Uniform double in [0,1) from raw generator bits; identical on all platforms.
inline double u01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * u01(g);
}

/// |x| materialized as Real (handles expression-template number types).
template <class Real>
Real mag(const Real& x) {
    return x < Real(0) ? Real(-x) : Real(x);
}

template <class Real>
Real max_of(std::initializer_list<Real> xs) {
    Real m(0);
    for (const Real& x : xs)
        if (x > m) m = x;
    return m;
}

}  // namespace detail

/// Raw residual plus the normalization scale of an identity evaluation.
template <class Real>
struct residual_t {
    Real residual;  // max |difference| across the sub-checks
    Real scale;     // largest intermediate term magnitude
};

// ---------------------------------------------------------------------------
// Chain reductions of the damping coefficients (polynomials in gamma, u, h)
// ---------------------------------------------------------------------------

template <class Real>
residual_t<Real> b_chain_residual(Real g, Real u, Real h) {
    const Real c1 = u - h, c2 = u + h;
    const Real disc = (g - 1) / 2 * u * u - h * h;
    const Real sum = (g - 1) / 2 * u * u + h * h;
    const Real target = (g - 3) * u * u * h * h;

    const Real p1 = (g - 1) / 4 * u * u * u - h * h * h / 2 - (g - 1) / 4 * u * u * h +
                    u * h * h / 2;
    const Real t1 = h * u * c1 * (h + (g - 1) / 2 * u);
    const Real forms1[4] = {
        c2 * c2 / 2 * disc - c2 * p1 - t1,
        c2 * c2 / 2 * disc - c1 * c2 / 2 * sum - t1,
        (g - 1) / 2 * u * u * c2 * h - h * h * c2 * u - t1,
        (g - 1) / 2 * u * u * h * (c2 - c1) - h * h * u * (c2 + c1),
    };

    const Real p2 = (g - 1) / 4 * u * u * u + h * h * h / 2 + (g - 1) / 4 * u * u * h +
                    u * h * h / 2;
    const Real t2 = h * u * c2 * (h - (g - 1) / 2 * u);
    const Real forms2[4] = {
        c1 * c1 / 2 * disc - c1 * p2 - t2,
        c1 * c1 / 2 * disc - c1 * c2 / 2 * sum - t2,
        -(g - 1) / 2 * u * u * c1 * h - h * h * c1 * u - t2,
        (g - 1) / 2 * u * u * h * (c2 - c1) - h * h * u * (c1 + c2),
    };

    const Real scale = detail::max_of<Real>(
        {detail::mag<Real>(c2 * c2 / 2 * disc), detail::mag<Real>(c2 * p1),
         detail::mag<Real>(t1), detail::mag<Real>(c1 * c1 / 2 * disc),
         detail::mag<Real>(c1 * p2), detail::mag<Real>(t2), detail::mag<Real>(target)});

    Real res = Real(0);
    for (const Real* f : {forms1, forms2})
        for (int i = 0; i < 4; ++i) {
            const Real d = detail::mag<Real>(f[i] - target);
            if (d > res) res = d;
        }
    return {res, scale};
}

// ---------------------------------------------------------------------------
// Four-coefficient vs reduced Riccati right sides (rational identity)
// ---------------------------------------------------------------------------

template <class Real>
residual_t<Real> riccati_equiv_residual(const gas_params_t<Real>& p, Real r, Real u, Real h,
                                        Real alpha, Real beta) {
    const point_state_t<Real> s{r, h, u};
    const auto lem = riccati_rhs_lemma(s, alpha, beta, p, Real(0));
    const auto red = riccati_rhs_simplified(s, alpha, beta, p, Real(0));
    const auto c = riccati_coeffs(s, p, Real(0));
    const Real g = p.gamma;
    const Real scale = detail::max_of<Real>(
        {detail::mag<Real>((g + 1) / 4 * beta * beta),
         detail::mag<Real>((g + 1) / 4 * alpha * alpha),
         detail::mag<Real>((g - 3) / 4 * alpha * beta), detail::mag<Real>(c.A1 * alpha),
         detail::mag<Real>(c.B1 * beta), detail::mag<Real>(c.A2 * beta),
         detail::mag<Real>(c.B2 * alpha)});
    const Real res = detail::max_of<Real>(
        {detail::mag<Real>(lem.d1_beta - red.d1_beta),
         detail::mag<Real>(lem.d2_alpha - red.d2_alpha)});
    return {res, scale};
}

// ---------------------------------------------------------------------------
// Weighted equations vs chain rule through h^lambda (floating-point only)
// ---------------------------------------------------------------------------

template <class Real>
residual_t<Real> tilde_chain_residual(const gas_params_t<Real>& p, Real r, Real u, Real h,
                                      Real alpha, Real beta) {
    using std::pow;
    const point_state_t<Real> s{r, h, u};
    const Real lam = p.lambda();
    const Real hl = pow(h, lam);
    const auto direct = riccati_rhs_tilde(s, hl * alpha, hl * beta, p, Real(0));

    // chain rule: d(h^lam q) = h^lam dq + lam h^(lam-1) q dh along the family
    const auto red = riccati_rhs_simplified(s, alpha, beta, p, Real(0));
    const Real d1_h = directional_derivs_unweighted(s, alpha, p, Real(0)).d1_h;
    const Real d2_h = d2_h_unweighted(s, beta, p, Real(0));
    const Real via_chain1 = hl * red.d1_beta + lam * pow(h, lam - 1) * beta * d1_h;
    const Real via_chain2 = hl * red.d2_alpha + lam * pow(h, lam - 1) * alpha * d2_h;

    const Real scale = detail::max_of<Real>(
        {detail::mag<Real>(hl * red.d1_beta), detail::mag<Real>(hl * red.d2_alpha),
         detail::mag<Real>(lam * pow(h, lam - 1) * beta * d1_h),
         detail::mag<Real>(lam * pow(h, lam - 1) * alpha * d2_h),
         detail::mag<Real>(direct.d1_beta_t), detail::mag<Real>(direct.d2_alpha_t)});
    const Real res =
        detail::max_of<Real>({detail::mag<Real>(direct.d1_beta_t - via_chain1),
                              detail::mag<Real>(direct.d2_alpha_t - via_chain2)});
    return {res, scale};
}

// ---------------------------------------------------------------------------
// Directional derivative formulas vs primitive elimination (rational)
// ---------------------------------------------------------------------------

template <class Real>
residual_t<Real> directional_residual(const gas_params_t<Real>& p, Real r, Real u, Real h,
                                      Real alpha, Real beta) {
    const point_state_t<Real> s{r, h, u};
    const Real c1 = u - h, c2 = u + h;
    const Real k = 2 / (p.gamma - 1);

    const auto pg = invert_gradients(s, alpha, beta, p, Real(0));
    const auto td = primitive_time_derivs(s, pg.u_r, pg.h_r, p);

    // family 1: compare formula values with q_t + c1 q_r
    const auto d1 = directional_derivs_unweighted(s, alpha, p, Real(0));
    const Real e1h = td.h_t + c1 * pg.h_r;
    const Real e1u = td.u_t + c1 * pg.u_r;
    const Real e1c2 = e1u + e1h;

    // family 2 mirrors
    const Real d2h = d2_h_unweighted(s, beta, p, Real(0));
    const Real d2u = d2_u_unweighted(s, beta, p, Real(0));
    const Real e2h = td.h_t + c2 * pg.h_r;
    const Real e2u = td.u_t + c2 * pg.u_r;

    // Riemann variable source laws: d1 z = (m/r) u h, d2 w = -(m/r) u h
    const Real src = p.m * u * h / r;
    const Real e1z = (td.u_t - k * td.h_t) + c1 * (pg.u_r - k * pg.h_r);
    const Real e2w = (td.u_t + k * td.h_t) + c2 * (pg.u_r + k * pg.h_r);

    const Real res = detail::max_of<Real>(
        {detail::mag<Real>(d1.d1_h - e1h), detail::mag<Real>(d1.d1_u - e1u),
         detail::mag<Real>(d1.d1_c2 - e1c2), detail::mag<Real>(d2h - e2h),
         detail::mag<Real>(d2u - e2u), detail::mag<Real>(e1z - src),
         detail::mag<Real>(e2w + src),
         // internal consistency of the c2 rate
         detail::mag<Real>(d1.d1_c2 - (d1.d1_u + d1.d1_h))});

    const Real scale = detail::max_of<Real>(
        {detail::mag<Real>(td.h_t), detail::mag<Real>(td.u_t),
         detail::mag<Real>(c1 * pg.u_r), detail::mag<Real>(c2 * pg.u_r),
         detail::mag<Real>(k * c2 * pg.h_r), detail::mag<Real>(src),
         detail::mag<Real>(d1.d1_c2), detail::mag<Real>(d1.d1_h)});
    return {res, scale};
}

// ---------------------------------------------------------------------------
// Extended-precision samplers
// ---------------------------------------------------------------------------

namespace detail {

struct sample {
    long double gamma;
    int m;
    long double r, u, h, alpha, beta;
};

inline sample draw(std::mt19937_64& g, const sample_spec& sp) {
    sample s;
    s.gamma = (u01(g) < sp.gamma_exact3_fraction)
                  ? 3.0L
                  : (long double)uniform(g, sp.gamma_min, sp.gamma_max);
    s.m = (g() & 1u) ? 1 : 2;
    s.r = uniform(g, sp.r_min, sp.r_max);
    for (;;) {
        s.h = std::pow(10.0L, (long double)uniform(g, sp.h_log10_min, sp.h_log10_max));
        s.u = uniform(g, -sp.u_abs_max, sp.u_abs_max);
        const long double scale = std::fabs(s.u) + s.h;
        if (std::fabs(s.u - s.h) > sp.sonic_reject * scale &&
            std::fabs(s.u + s.h) > sp.sonic_reject * scale)
            break;
    }
    s.alpha = uniform(g, -sp.grad_abs_max, sp.grad_abs_max);
    s.beta = uniform(g, -sp.grad_abs_max, sp.grad_abs_max);
    return s;
}

template <class Fn>
identity_report run_identity(const std::string& id, const sample_spec& sp, double tol,
                             Fn&& eval) {
    std::mt19937_64 gen(sp.seed);
    identity_report rep;
    rep.id = id;
    rep.samples = sp.samples;
    rep.tolerance = tol;
    for (int i = 0; i < sp.samples; ++i) {
        const sample s = draw(gen, sp);
        const residual_t<long double> rr = eval(s);
        const long double floor = 1e-300L;
        const double norm = double(rr.residual / std::max(rr.scale, floor));
        if (norm >= rep.max_residual) {
            rep.max_residual = norm;
            rep.worst_gamma = double(s.gamma);
            rep.worst_m = s.m;
            rep.worst_r = double(s.r);
            rep.worst_u = double(s.u);
            rep.worst_h = double(s.h);
        }
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

inline gas_params_t<long double> params_of(const sample& s) {
    return gas_params_t<long double>{s.gamma, 1.0L, s.m};
}

}  // namespace detail

inline identity_report verify_b_chain(const sample_spec& sp, double tol = 1e-11) {
    return detail::run_identity("b_chain", sp, tol, [](const detail::sample& s) {
        return b_chain_residual<long double>(s.gamma, s.u, s.h);
    });
}

inline identity_report verify_riccati_equiv(const sample_spec& sp, double tol = 1e-11) {
    return detail::run_identity("riccati_equiv", sp, tol, [](const detail::sample& s) {
        return riccati_equiv_residual<long double>(detail::params_of(s), s.r, s.u, s.h,
                                                   s.alpha, s.beta);
    });
}

inline identity_report verify_tilde_chainrule(const sample_spec& sp, double tol = 1e-11) {
    return detail::run_identity("tilde_chainrule", sp, tol, [](const detail::sample& s) {
        return tilde_chain_residual<long double>(detail::params_of(s), s.r, s.u, s.h,
                                                 s.alpha, s.beta);
    });
}

inline identity_report verify_directional_identities(const sample_spec& sp,
                                                     double tol = 1e-11) {
    return detail::run_identity("directional", sp, tol, [](const detail::sample& s) {
        return directional_residual<long double>(detail::params_of(s), s.r, s.u, s.h,
                                                 s.alpha, s.beta);
    });
}

/// All four identity families in gate order.
inline std::vector<identity_report> verify_all_identities(const sample_spec& sp,
                                                          double tol = 1e-11) {
    return {verify_b_chain(sp, tol), verify_riccati_equiv(sp, tol),
            verify_tilde_chainrule(sp, tol), verify_directional_identities(sp, tol)};
}

}  // namespace inwave
