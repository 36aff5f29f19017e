#pragma once

#include <optional>

#include "nsblow/fields/smoothstep.hpp"
#include "nsblow/potential/radial_potential.hpp"

namespace nsblow::potential {

/// Smooth cutoff phi(x,t) = psi(|x|) chi(t): psi = 1 on r <= 1, 0 on r >= 2;
/// chi = 0 for t <= T/4, 1 for t >= T/2. Exponential-glue smoothstep profile.
struct CutoffSpec {
    double T = 1.0;

    double psi(double r) const { return 1.0 - smooth_step(r - 1.0); }
    double psi_d1(double r) const { return -smooth_step_d1(r - 1.0); }
    double psi_d2(double r) const { return -smooth_step_d2(r - 1.0); }
    double psi_d3(double r) const {  // fd of the closed-form second derivative
        double h = 1e-4;
        return (psi_d2(r + h) - psi_d2(r - h)) / (2.0 * h);
    }
    double chi(double t) const { return smooth_step(4.0 * t / T - 1.0); }
    double chi_d1(double t) const {
        return smooth_step_d1(4.0 * t / T - 1.0) * 4.0 / T;
    }

    double phi(const Vec3& x, double t) const { return psi(x.norm()) * chi(t); }
    Vec3 grad_phi(const Vec3& x, double t) const;
    double lap_phi(const Vec3& x, double t) const;
    double dt_phi(const Vec3& x, double t) const { return psi(x.norm()) * chi_d1(t); }
    /// gradient of lap phi (needs psi''')
    Vec3 grad_lap_phi(const Vec3& x, double t) const;
    /// Hessian of phi
    Mat3 hess_phi(const Vec3& x, double t) const;
};

enum class RieszMethod { Radial, PV, Fourier };

class PVRiesz;
class FourierRiesz;

/// The divergence-free velocity v = curl curl (-Delta)^{-1} h of the
/// construction, with an optional spatial-temporal cutoff; the
/// Radial method is the production route, PV and Fourier are the
/// cross-validation routes.
class VelocityField {
public:
    VelocityField(const heat::HeatSolutionEvaluator& ev,
                  RieszMethod method = RieszMethod::Radial,
                  std::optional<CutoffSpec> cutoff = std::nullopt);
    ~VelocityField();

    Vec3 velocity(const Vec3& x, double t) const;
    Mat3 gradient(const Vec3& x, double t) const;  // (i,j) entry = d_j v_i

    /// curl (-Delta)^{-1} h = (0, d3 Phi, -d2 Phi); used by the cutoff terms.
    Vec3 curl_potential(const Vec3& x, double t) const;

    bool has_cutoff() const { return cutoff_.has_value(); }
    const CutoffSpec& cutoff() const;
    const heat::HeatSolutionEvaluator& source() const { return ev_; }
    const PotentialCache& potentials() const { return cache_; }
    RieszMethod method() const { return method_; }

private:
    Vec3 base_velocity(const Vec3& x, double t) const;  // no cutoff
    Mat3 base_gradient(const Vec3& x, double t) const;

    const heat::HeatSolutionEvaluator& ev_;
    RieszMethod method_;
    std::optional<CutoffSpec> cutoff_;
    PotentialCache cache_;
    mutable std::mutex mu_;
    mutable std::map<double, std::shared_ptr<PVRiesz>> pv_;
    mutable std::map<double, std::shared_ptr<FourierRiesz>> fourier_;
};

/// P = d1 (-Delta)^{-1} f1 (the reduced closed-form pressure).
double pressure_eval(const heat::ForcingProfile& profile, const Vec3& x, double t);
Vec3 pressure_grad(const heat::ForcingProfile& profile, const Vec3& x, double t);
/// Unreduced pressure (Delta - d_t)(div (-Delta)^{-1} h) for auditing the
/// reduction: time derivative by centered differences of d1 Phi.
double pressure_eval_unreduced(const VelocityField& vf, const Vec3& x, double t);

/// The lower-order force of the cutoff construction (four-term expression).
Vec3 fb_eval(const VelocityField& vf, const Vec3& x, double t);

/// Total force: cutoff present: F = f phi - (v.grad) v + f_b;
/// absent: F = f - (v.grad) v.
Vec3 force_assemble(const VelocityField& vf, const Vec3& x, double t);

struct NsResidualReport {
    double max_relative = 0.0;
    SpaceTimePoint worst;
};

/// Max relative residual of Delta v - [v grad v] - grad P - dt v - F over the
/// samples. include_nonlinear=false checks the linear Stokes system instead;
/// force defaults to force_assemble (pass a custom one for the Stokes check).
NsResidualReport ns_residual(
    const VelocityField& vf, const std::vector<SpaceTimePoint>& samples,
    const std::function<Vec3(const Vec3&, double)>& force,
    bool include_nonlinear = true, double h_space = 0.04, double h_time = 1e-3);

}  // namespace nsblow::potential
