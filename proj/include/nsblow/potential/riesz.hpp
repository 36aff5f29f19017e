#pragma once

#include "nsblow/potential/radial_potential.hpp"

namespace nsblow::potential {

/// Principal-value evaluation of d_i d_j (-Delta)^{-1} applied to a scalar
/// field: integral of (3 z^i z^j - delta_ij) / (4 pi |z|^3) over |z| > eps,
/// Richardson-extrapolated over {eps, eps/2}, plus the local term
/// -delta_ij f(x)/3 pinned by the trace identity.
class PVRiesz {
public:
    PVRiesz(const heat::HeatSolutionEvaluator& ev, double t);

    /// d_i d_j (-Delta)^{-1} h1 at x.
    double second(int i, int j, const Vec3& x) const;
    /// Same operator applied to d_k h1 (for velocity gradients).
    double second_of_grad(int i, int j, int k, const Vec3& x) const;
    /// Generic source (field must be evaluable everywhere; local_value is
    /// field(x) used for the delta_ij correction).
    double second_generic(const ScalarField& field, int i, int j, const Vec3& x,
                          double local_value) const;

    double error_budget() const { return budget_; }
    double t() const { return t_; }

private:
    const heat::RadialProfile& prof_;
    double t_, c_;
    double eps0_ = 0.02;
    double budget_ = 5e-5;
    int gl_mu_ = 24, n_phi_ = 48, gl_r_ = 12;
};

/// Spectral route: h1 sampled on a periodic box [-L, L]^3, multiplier
/// -xi_i xi_j / |xi|^2 with zero mode nulled. Evaluation points are snapped
/// to the nearest grid node.
class FourierRiesz {
public:
    FourierRiesz(const heat::HeatSolutionEvaluator& ev, double t, double L = 12.0,
                 int n = 128);

    double second(int i, int j, const Vec3& x) const;  // on h1
    double second_of_grad(int i, int j, int k, const Vec3& x) const;
    Vec3 snap(const Vec3& x) const;
    double error_budget() const { return budget_; }

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    double budget_ = 3e-4;
};

class VelocityField;

/// Cross-validating entry point: computes the PV and Fourier values and
/// throws CrossValidationError if they disagree beyond 10x the combined
/// budget; returns the PV value (the more accurate off-grid route).
double riesz_second_checked(const PVRiesz& pv, const FourierRiesz& fr, int i,
                            int j, const Vec3& x);

}  // namespace nsblow::potential
