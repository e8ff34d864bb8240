#pragma once

// Fourth-order finite-difference first derivatives on a uniform grid:
// 5-point central stencil in the interior, 5-point one-sided closures at the
// two nodes nearest each edge.  All weights are exact in binary floating
// point except the common 1/12 factor.

#include <vector>

#include "inwave/errors.hpp"

namespace inwave::fd {

inline constexpr int stencil_half_width = 2;

/// First derivative at node i of an n-point array with spacing dr.
inline double deriv_at(const double* f, int n, int i, double dr) {
    if (n < 5) throw input_error("fd: need at least 5 nodes");
    const double s = 1.0 / (12.0 * dr);
    if (i >= 2 && i <= n - 3)
        return s * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
    if (i == 0) return s * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
    if (i == 1) return s * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
    if (i == n - 2)
        return s * (-f[n - 5] + 6 * f[n - 4] - 18 * f[n - 3] + 10 * f[n - 2] +
                    3 * f[n - 1]);
    if (i == n - 1)
        return s * (3 * f[n - 5] - 16 * f[n - 4] + 36 * f[n - 3] - 48 * f[n - 2] +
                    25 * f[n - 1]);
    throw input_error("fd: node index out of range");
}

inline void derivative(const std::vector<double>& f, double dr, std::vector<double>& out) {
    const int n = int(f.size());
    if (n < 5) throw input_error("fd: need at least 5 nodes");
    out.resize(f.size());
    const double s = 1.0 / (12.0 * dr);
    out[0] = s * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
    out[1] = s * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
    for (int i = 2; i <= n - 3; ++i)
        out[i] = s * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
    out[n - 2] =
        s * (-f[n - 5] + 6 * f[n - 4] - 18 * f[n - 3] + 10 * f[n - 2] + 3 * f[n - 1]);
    out[n - 1] =
        s * (3 * f[n - 5] - 16 * f[n - 4] + 36 * f[n - 3] - 48 * f[n - 2] + 25 * f[n - 1]);
}

inline std::vector<double> derivative(const std::vector<double>& f, double dr) {
    std::vector<double> out;
    derivative(f, dr, out);
    return out;
}

}  // namespace inwave::fd
