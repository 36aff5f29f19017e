#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "nsblow/heat/heat_solution.hpp"

namespace nsblow::potential {

/// Radial data of Phi = (-Delta)^{-1} h1 at one time level. With U = h1,
/// M(rho) = int_0^rho U r^2 dr and N(rho) = int_rho^inf U r dr:
///   Phi = M/rho + N,  Phi'/rho = -m  (m = M/rho^3),  Hess Phi = A xx^ + pp I
/// where pp = -m and A = 3m - U. Third derivatives come from
///   d1 = A/rho, d2 = -5 A/rho - U':
///   d_i d_j d_k Phi = d2 x^i x^j x^k + d1 (delta_ij x^k + delta_ik x^j + delta_jk x^i).
struct RadialPotentialData {
    double u = 0.0, du = 0.0;   // h1 and its radial derivative
    double m = 0.0;             // M / rho^3  (-> U(0)/3 at the origin)
    double big_a = 0.0;         // A = 3m - U
    double phi = 0.0;           // the potential itself
    double d1 = 0.0, d2 = 0.0;  // third-derivative coefficients
};

class RadialPotential {
public:
    RadialPotential(const heat::HeatSolutionEvaluator& ev, double t);

    RadialPotentialData data(double rho) const;
    double t() const { return t_; }
    double c() const { return c_; }
    double m_inf() const { return m_inf_; }  // total mass integral M(rho_max)
    double rho_max() const { return rho_max_; }

private:
    double t_ = 0.0, c_ = 1.0, rho_max_ = 0.0, m_inf_ = 0.0;
    double zeta0_ = 0.0, dz_ = 0.0;
    int nodes_ = 0;
    UniformSpline sm_, saa_, sn_, su_, sp1_;  // m, A/rho^2, N, U, (U'/rho)(rho^2+c)
};

/// Shared cache of radial potentials keyed by time.
class PotentialCache {
public:
    explicit PotentialCache(const heat::HeatSolutionEvaluator& ev) : ev_(ev) {}
    const RadialPotential& at(double t) const;
    const heat::HeatSolutionEvaluator& source() const { return ev_; }

private:
    const heat::HeatSolutionEvaluator& ev_;
    mutable std::mutex mu_;
    mutable std::map<double, std::shared_ptr<RadialPotential>> cache_;
};

/// Radial pressure data: P = Psi(rho) x^1 with Psi = (1/rho^2) int_0^rho g r^2 dr,
/// g = -f1 the (positive) heat source. Equals d_1 (-Delta)^{-1} f1.
struct PressureRadial {
    double psi = 0.0;    // P / x^1
    double dpsi = 0.0;   // radial derivative of psi
    double g = 0.0;      // source value at rho
};

PressureRadial pressure_radial(const heat::ForcingProfile& profile, double rho,
                               double t);

/// Q = (-Delta)^{-1} f1 as a radial function (for the cutoff force terms):
/// Q' = +psi (see pressure_radial); Q itself = -(Mg/rho + Ng).
double newton_potential_source(const heat::ForcingProfile& profile, double rho,
                               double t);

/// Newtonian potential of h1 itself: Phi(rho) at time t.
double newton_potential(const RadialPotential& pot, double rho);

}  // namespace nsblow::potential
