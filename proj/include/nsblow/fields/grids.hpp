#pragma once

#include <vector>

#include "nsblow/common.hpp"

namespace nsblow {

/// Geometric schedule t_k = T (1 - 2^{-k}) refining toward the final time.
struct TimeLadder {
    double T = 1.0;
    int k_max = 1;
    std::vector<double> levels;  // t_0 = 0, ..., t_{k_max} < T
};

TimeLadder make_time_ladder(double T, int k_max);

/// Cubic lattice on [-L, L]^3, n cells per axis (n even, so the origin and
/// all sign/permutation images of every node are nodes), plus optional
/// dyadic radial shells for sup-norm probing.
struct SampleGrid {
    double L = 6.0;
    int n = 32;
    double shell_r0 = 0.0;  // 0 disables shells
    int shell_count = 0;

    double spacing() const { return 2.0 * L / n; }
    double axis(int i) const { return -L + spacing() * i; }
    /// Trapezoid weight along one axis (0.5 at the two boundary nodes).
    double axis_weight(int i) const { return (i == 0 || i == n) ? 0.5 : 1.0; }
    std::vector<double> shell_radii() const;
};

SampleGrid make_sample_grid(double L, int n, double shell_r0 = 0.0,
                            int shell_count = 0);

/// Directions probed for sup norms and tail envelopes: axes, face diagonals
/// and space diagonals, all normalized, with both signs.
const std::vector<Vec3>& probe_directions();

}  // namespace nsblow
