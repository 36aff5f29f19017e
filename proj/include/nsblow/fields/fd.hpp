#pragma once

#include "nsblow/common.hpp"

namespace nsblow {

/// A point-evaluable scalar field of space and time.
using SpaceTimeField = std::function<double(const Vec3&, double)>;

/// 4th-order centered gradient, step h per axis.
Vec3 fd_gradient(const SpaceTimeField& f, const Vec3& x, double t, double h);

/// 4th-order centered Laplacian (sum of per-axis second-difference stencils).
double fd_laplacian(const SpaceTimeField& f, const Vec3& x, double t, double h);

/// 4th-order time derivative. Centered when the 5-point stencil fits in
/// (0, t_max); one-sided toward the interior otherwise. Throws
/// invalid_argument when no stencil fits below t_max.
double fd_time(const SpaceTimeField& f, const Vec3& x, double t, double h,
               double t_max);

/// Default finite-difference steps (space, and time at distance T - t from
/// the final time).
inline double fd_default_space_step() { return 1e-2; }
inline double fd_default_time_step(double T, double t) {
    double dt = (T - t) / 8.0;
    return dt < 1e-3 ? dt : 1e-3;
}

}  // namespace nsblow
