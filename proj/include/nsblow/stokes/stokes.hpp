#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nsblow/common.hpp"

namespace nsblow::stokes {

/// Vector field sampled on the periodic box [-L, L)^3, with trilinear
/// interpolation between nodes; points outside the box evaluate to zero.
struct VectorGrid {
    double L = 0.0;
    int n = 0;
    double dx = 0.0;
    std::array<std::vector<double>, 3> comp;

    bool empty() const { return n == 0; }
    Vec3 at(const Vec3& x) const;
    Vec3 node(int ix, int iy, int iz) const;
    Vec3 node_point(int ix, int iy, int iz) const;
    double max_norm() const;
};

VectorGrid make_vector_grid(double L, int n);

/// Spectral realization of the Stokes solution operator on the periodic box:
/// divergence-free (Leray) projection composed with the heat multiplier
/// e^{-|xi|^2 (t - s)}, integrated over s by a geometric substep schedule
/// refined toward s = t.
class StokesPropagator {
public:
    explicit StokesPropagator(double L = 12.0, int n = 48);

    /// Duhamel solution at time t of  dt v = Lap v - grad p + F,  v(0) = 0,
    /// div v = 0. levels/gl_order control the geometric time quadrature.
    VectorGrid duhamel(const std::function<Vec3(const Vec3&, double)>& force,
                       double t, int levels = 12, int gl_order = 4) const;

    /// Leray projection of a steady field (s-independent), for identities.
    VectorGrid project(const std::function<Vec3(const Vec3&)>& field) const;

    double box() const { return L_; }
    int resolution() const { return n_; }

private:
    double L_;
    int n_;
};

}  // namespace nsblow::stokes
