#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nsblow/common.hpp"
#include "nsblow/fields/fd.hpp"
#include "nsblow/fields/quadrature.hpp"
#include "nsblow/heat/forcing.hpp"

namespace nsblow::heat {

/// Quadrature knobs for the Duhamel integral.
struct HeatQuad {
    int gl_time = 12;       // Gauss-Legendre order per time panel
    int gl_space = 12;      // Gauss-Legendre order per radial panel
    int extra_levels = 0;   // bump for the refined error-check pass
    double r_max = 8.5;     // radial truncation of the source
    double tail_tol = 1e-12;
};

/// U(rho) = h1 at radius rho, with first and second radial derivatives.
struct RadialDerivs {
    double u = 0.0, du = 0.0, d2u = 0.0;
};

/// One-shot radial quadrature of the Duhamel formula at (rho, t).
/// No error estimate; callers wanting a certificate use HeatSolutionEvaluator.
RadialDerivs duhamel_radial(const ForcingProfile& profile, double rho, double t,
                            const HeatQuad& quad);

/// Cubic-spline radial profile of h1(.,t), built once per time level.
/// Stored in the stretched variable zeta = ln(rho^2 + c) so the spline sees
/// smooth, even data near the origin and near the density concentration.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(const ForcingProfile& profile, double t, const HeatQuad& quad,
                  double rho_max = 16.0, double dzeta = 1.0 / 48.0);

    double value(double rho) const;
    double deriv(double rho) const;
    double second(double rho) const;
    RadialDerivs all(double rho) const;

    double t() const { return t_; }
    double rho_max() const { return rho_max_; }
    bool empty() const { return nodes_ == 0; }

private:
    double t_ = 0.0, c_ = 1.0, rho_max_ = 0.0;
    double zeta0_ = 0.0, dz_ = 0.0;
    int nodes_ = 0;
    UniformSpline su_, sp1_, sp2_;  // U, (U'/rho)(rho^2+c), U''(rho^2+c)
    double u_far_ = 0.0;  // kept 0; beyond rho_max the solution is negligible
};

/// Point evaluator for h = (h1, 0, 0) with memoized radial profiles and an
/// accuracy certificate on direct point evaluations.
class HeatSolutionEvaluator {
public:
    explicit HeatSolutionEvaluator(const ForcingProfile& profile,
                                   double tol = 1e-9,
                                   HeatQuad quad = HeatQuad{});

    /// Quadrature-accurate radial data; throws AccuracyError if the refined
    /// pass disagrees beyond tol (relative to the solution scale).
    RadialDerivs radial(double rho, double t) const;

    double h1(const Vec3& x, double t) const;
    Vec3 grad_h1(const Vec3& x, double t) const;
    Mat3 hess_h1(const Vec3& x, double t) const;

    /// Spline profile at time t, built on first use and cached.
    const RadialProfile& profile(double t) const;

    const ForcingProfile& forcing() const { return profile_; }
    double T() const { return profile_.T; }
    double tol() const { return tol_; }
    const HeatQuad& quad() const { return quad_; }

private:
    ForcingProfile profile_;
    double tol_;
    HeatQuad quad_;
    mutable std::mutex mu_;
    mutable std::map<double, std::shared_ptr<RadialProfile>> profiles_;
    mutable std::map<std::pair<double, double>, RadialDerivs> memo_;
};

/// Max relative residual |Lap h1 - dt h1 - f1| / |f1| over the sample cloud,
/// by finite differences on checked point evaluations.
struct ResidualReport {
    double max_relative = 0.0;
    SpaceTimePoint worst;
};

ResidualReport heat_residual(const HeatSolutionEvaluator& ev,
                             const std::vector<SpaceTimePoint>& samples,
                             double h_space = 0.04, double h_time = 1e-3);

}  // namespace nsblow::heat
