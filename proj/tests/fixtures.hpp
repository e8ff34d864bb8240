#pragma once

// Shared scenario fixtures.  canonical_config() must stay equal to
// configs/canonical.json (a test asserts this), so the repo file remains the
// single source of truth for the flagship run.

#include "inwave/scenario.hpp"

namespace fixtures {

/// Flagship certification scenario: gamma = 3 focusing flow on a narrow band
/// around r = 10.5 with a compression seed at r_star.
inline inwave::scenario_config canonical_config() {
    inwave::scenario_config c;
    c.label = "canonical";
    c.seed = 20260815;
    c.gas = {3.0, 1.0 / 3.0, 1};
    c.bands.r0 = 10.0;
    c.bands.r1 = 10.5;
    c.bands.r2 = 10.54;
    c.bands.r_star = 10.532;
    c.bands.h_lo = 0.5;
    c.bands.h_hi = 1.0;
    c.bands.u_lo_mag = 2.5;
    c.bands.u_hi_mag = 4.0;
    c.bands.alpha_lo = 1.05;
    c.bands.alpha_hi = 1.6;
    c.bands.beta_bar = 6.0;
    c.initial.type = "generated";
    c.initial.bump.width = 0.004;
    c.initial.bump.order = 8;
    c.initial.bump.target = -191.0;
    c.initial.options.pad = 0.3;
    c.solver.n = 4096;
    c.solver.cfl = 0.4;
    c.solver.trigger_ceiling = 250.0;
    c.solver.pin_inflow_nodes = 2;
    c.diag.path_count = 5;
    c.diag.rel_tol = 1e-8;
    c.diag.identity_samples = 10000;
    c.diag.identity_tol = 1e-11;
    c.diag.theorem_rtol = 0.02;
    c.diag.resolution_factor = 0.05;
    c.diag.check_samples = 2000;
    c.diag.coarsen = 2;
    return c;
}

/// Same physics at half resolution with cheaper diagnostics; used where the
/// test only needs a full pipeline run, not certified-quality margins.
inline inwave::scenario_config reduced_config() {
    inwave::scenario_config c = canonical_config();
    c.label = "reduced";
    c.solver.n = 2048;
    c.solver.trigger_ceiling = 150.0;
    c.diag.resolution_factor = 0.08;
    c.diag.theorem_rtol = 0.06;  // half-resolution run lags the bound more
    c.diag.path_count = 3;
    c.diag.identity_samples = 2000;
    return c;
}

/// Negative control: steady data on the same bands; no compression seed, so
/// the gradient hypotheses fail and nothing should trigger.  t_end is left
/// unset so the run goes to the full derived horizon T.
inline inwave::scenario_config stationary_config() {
    inwave::scenario_config c = canonical_config();
    c.label = "stationary-control";
    c.initial.type = "stationary";
    c.initial.bump = {};
    c.solver.n = 1024;
    c.solver.trigger_ceiling = 150.0;
    c.diag.identity_samples = 2000;
    return c;
}

}  // namespace fixtures
