#pragma once

#include "nsblow/common.hpp"
#include "nsblow/fields/grids.hpp"

namespace nsblow {

struct LpNormOptions {
    /// Replace the lattice contribution near the origin by a graded
    /// radial-angular quadrature over B(0, ball_radius); required for fields
    /// that concentrate at the (T - t) scale the lattice cannot resolve.
    bool origin_refined = false;
    double ball_radius = 1.0;
    /// Also integrate at 2n and report the difference as a convergence check.
    bool richardson = false;
    int angular_theta = 12;
    int angular_phi = 24;
};

struct LpNormResult {
    double value = 0.0;          // norm including the analytic tail bound
    double tail_estimate = 0.0;  // value minus the box-only norm
    bool tail_divergent = false; // a * p <= 3: no finite tail bound exists
    double richardson_delta = 0.0;
    double box_integral = 0.0;   // integral of |f|^p over the box (+ ball)
};

/// Lattice-trapezoid integral of |field|^p over the grid box, with the
/// radial tail beyond L bounded analytically from the declared |x|^{-a}
/// envelope (a = tail_decay). The envelope constant is fitted on boundary
/// probes. a * p <= 3 is reported as tail-divergent instead of a number.
LpNormResult lp_norm(const ScalarField& field, double p, const SampleGrid& grid,
                     double tail_decay, const LpNormOptions& opt = {});

}  // namespace nsblow
