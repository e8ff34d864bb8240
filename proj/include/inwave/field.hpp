#pragma once

// Uniform radial grid, field snapshots, and the space-time field store.
//
// Interpolation: cubic Hermite in r (nodal slopes from the 4th-order
// stencil, C^1 in r) composed with cubic Hermite in t (slopes are the
// stored PDE time derivatives).  Radial derivatives in time are
// interpolated using d(f_r)/dt = (f_t)_r, keeping every queried quantity
// consistent with the stored dynamics.

#include <cmath>
#include <string>
#include <vector>

#include "inwave/errors.hpp"
#include "inwave/fd.hpp"

namespace inwave {

struct grid {
    double r_min = 0, r_max = 0;
    int n = 0;
    double dr() const { return (r_max - r_min) / (n - 1); }
    double r(int i) const { return r_min + i * dr(); }
    /// Index of the cell [r(i), r(i+1)] containing radius r, clamped.
    int cell_of(double r) const {
        int i = int(std::floor((r - r_min) / dr()));
        if (i < 0) i = 0;
        if (i > n - 2) i = n - 2;
        return i;
    }
};

inline grid make_grid(double r_min, double r_max, int n) {
    if (!(r_min > 0)) throw input_error("grid: r_min must be positive");
    if (!(r_max > r_min)) throw input_error("grid: r_max must exceed r_min");
    if (n < 16) throw input_error("grid: need at least 16 nodes");
    return {r_min, r_max, n};
}

struct field_snapshot {
    double t = 0;
    std::vector<double> h, u;      // state
    std::vector<double> h_t, u_t;  // PDE time derivatives at t
};

/// State and first derivatives interpolated at one space-time point.
struct field_sample {
    double r = 0, t = 0;
    double h = 0, u = 0;
    double h_t = 0, u_t = 0;
    double h_r = 0, u_r = 0;
};

namespace detail {

/// Cubic Hermite value and derivative on [0, w] at local coordinate x.
struct hermite_eval {
    double value, deriv;
};

inline hermite_eval hermite(double f0, double f1, double d0, double d1, double w,
                            double x) {
    const double s = x / w;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double g00 = 6 * s2 - 6 * s, g10 = 3 * s2 - 4 * s + 1;
    const double g01 = -6 * s2 + 6 * s, g11 = 3 * s2 - 2 * s;
    return {h00 * f0 + h01 * f1 + w * (h10 * d0 + h11 * d1),
            (g00 * f0 + g01 * f1) / w + g10 * d0 + g11 * d1};
}

}  // namespace detail

class space_time_field {
  public:
    explicit space_time_field(const grid& g) : g_(g) {}

    const grid& geometry() const { return g_; }
    const std::vector<field_snapshot>& snapshots() const { return snaps_; }
    bool empty() const { return snaps_.empty(); }
    double t_front() const { return snaps_.front().t; }
    double t_back() const { return snaps_.back().t; }

    void push(field_snapshot snap) {
        const size_t n = size_t(g_.n);
        if (snap.h.size() != n || snap.u.size() != n || snap.h_t.size() != n ||
            snap.u_t.size() != n)
            throw input_error("space_time_field: snapshot arrays must match the grid");
        if (!snaps_.empty() && !(snap.t > snaps_.back().t))
            throw input_error("space_time_field: timestamps must strictly increase");
        for (double hv : snap.h)
            if (!(hv > 0))
                throw vacuum_error("space_time_field: nonpositive sound speed stored at t = " +
                                   std::to_string(snap.t));
        snaps_.push_back(std::move(snap));
    }

    bool in_hull(double r, double t) const {
        return !snaps_.empty() && r >= g_.r_min && r <= g_.r_max && t >= t_front() &&
               t <= t_back();
    }

    field_sample sample(double r, double t) const {
        if (!in_hull(r, t))
            throw input_error("space_time_field: query (r = " + std::to_string(r) +
                              ", t = " + std::to_string(t) + ") outside the stored hull");
        const size_t k = interval_of(t);
        const node_eval a = eval_snapshot(snaps_[k], r);
        if (snaps_.size() == 1) {
            return {r, t, a.h.value, a.u.value, a.ht.value, a.ut.value, a.h.deriv,
                    a.u.deriv};
        }
        const field_snapshot& s0 = snaps_[k];
        const field_snapshot& s1 = snaps_[k + 1];
        const node_eval b = eval_snapshot(s1, r);
        const double w = s1.t - s0.t, x = t - s0.t;

        const auto H = detail::hermite(a.h.value, b.h.value, a.ht.value, b.ht.value, w, x);
        const auto U = detail::hermite(a.u.value, b.u.value, a.ut.value, b.ut.value, w, x);
        const auto Hr = detail::hermite(a.h.deriv, b.h.deriv, a.ht.deriv, b.ht.deriv, w, x);
        const auto Ur = detail::hermite(a.u.deriv, b.u.deriv, a.ut.deriv, b.ut.deriv, w, x);
        return {r, t, H.value, U.value, H.deriv, U.deriv, Hr.value, Ur.value};
    }

  private:
    struct node_eval {
        detail::hermite_eval h, u, ht, ut;
    };

    /// Index k with t in [t_k, t_{k+1}] (last interval for t == t_back).
    size_t interval_of(double t) const {
        size_t lo = 0, hi = snaps_.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (snaps_[mid].t <= t ? lo : hi) = mid;
        }
        return lo;
    }

    /// Value and r-derivative of all four arrays of one snapshot at radius r.
    node_eval eval_snapshot(const field_snapshot& s, double r) const {
        const int i = g_.cell_of(r);
        const double dr = g_.dr(), x = r - g_.r(i);
        const int n = g_.n;
        auto along = [&](const std::vector<double>& f) {
            const double d0 = fd::deriv_at(f.data(), n, i, dr);
            const double d1 = fd::deriv_at(f.data(), n, i + 1, dr);
            return detail::hermite(f[i], f[i + 1], d0, d1, dr, x);
        };
        return {along(s.h), along(s.u), along(s.h_t), along(s.u_t)};
    }

    grid g_;
    std::vector<field_snapshot> snaps_;
};

}  // namespace inwave
