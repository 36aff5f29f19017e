#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nsblow/fields/grids.hpp"
#include "nsblow/fields/lp_norm.hpp"
#include "nsblow/heat/heat_solution.hpp"
#include "nsblow/potential/riesz.hpp"
#include "nsblow/potential/velocity.hpp"

namespace nsblow::audit {

// ---------------------------------------------------------------------------
// blow-up rate fits

enum class RateModel { Log, LogLog };

/// Least-squares fit of a time series against m(t) = ln(1/(T-t)) or
/// ln ln(1/(T-t)), plus the certified lower envelope min_{k>=6} value/m(t_k).
struct RateFit {
    RateModel model = RateModel::Log;
    std::vector<std::pair<double, double>> series;  // (t_k, value)
    double slope = 0.0;
    double intercept = 0.0;
    double lower_const = 0.0;
    bool monotone = true;
};

RateFit blowup_fit(const std::function<double(double)>& value_at,
                   const TimeLadder& ladder, RateModel model);

// ---------------------------------------------------------------------------
// decay-envelope audits

enum class BoundId {
    SolutionDecay,          // |h1|    <= C e^{-c|x|^2} (1 + |ln(|x|^2 + T-t)|)
    GradientDecay,          // |grad h1|  <= C e^{-c|x|^2} (1 + 1/(|x|+sqrt(T-t)))
    HessianDecay,           // |hess h1|  <= C e^{-c|x|^2}/(|x|^2+T-t) * log factor
    VelocityDecay,          // |v|     <= C (1 + |ln(|x|^2 + T-t)|) / (1+|x|^2)
    VelocityGradientDecay,  // |grad v| <= C /(1+|x|^2) * near-time factors
    StokesDecay,            // velocity envelope for the small-data linear flow
    StokesGradientDecay,    // its gradient envelope
};

struct BoundAudit {
    BoundId id;
    std::vector<SpaceTimePoint> cloud;
    double fitted_c = 0.0;  // fixed decay rate used inside the envelope
    double fitted_C = 0.0;  // max ratio over the training half
    double worst_margin = 0.0;
    bool pass = false;
};

/// Fits C on the even-index half of the cloud and validates the odd-index
/// half against slack * C * envelope; worst_margin is the minimum slack
/// headroom (negative = violation).
BoundAudit bound_audit(const potential::VelocityField& vf, BoundId id,
                       const std::vector<SpaceTimePoint>& cloud,
                       double slack = 1.5);

/// Deterministic sample cloud: uniform directions, radii in [0, r_max], and
/// times quantized to a geometric approach of T (so evaluator caches stay
/// bounded).
std::vector<SpaceTimePoint> sample_cloud(unsigned seed, std::size_t count,
                                         double r_max, double t_min,
                                         double t_max, double T = 1.0);

// ---------------------------------------------------------------------------
// norm reports

struct NormSeries {
    std::vector<double> t;
    std::vector<double> value;
    std::vector<double> error;  // refinement delta when requested, else 0
    std::vector<double> tail;
};

struct EnergyReport {
    std::vector<double> t;
    std::vector<double> v_l2;            // ||v(., t_k)||_{L^2}
    std::vector<double> v_dissipation;   // cumulative int ||grad v||^2
    std::vector<double> h_l2;            // the scalar-solution analogues
    std::vector<double> h_dissipation;
};

EnergyReport energy_report(const potential::VelocityField& vf,
                           const TimeLadder& ladder, const SampleGrid& grid);

NormSeries critical_norm_report(
    const std::function<Vec3(const Vec3&, double)>& force,
    const TimeLadder& ladder, const SampleGrid& grid, double p = 1.5,
    double tail_decay = 4.0, const LpNormOptions& opt = {true, 1.0});

// ---------------------------------------------------------------------------
// symmetry identities (singular-integral route; radial symmetry is the input
// data's property, not an assumption of the operator)

struct SymmetryReport {
    double perm_defect = 0.0;   // g_{23}(x1,x2,x3) vs g_{13}(x2,x1,x3)
    double sum_defect = 0.0;    // g_{23}+g_{13}+g_{12} + 2 h
    double trace_defect = 0.0;  // sum_i d_i^2 (-Delta)^{-1} h + h
};

SymmetryReport symmetry_check(const heat::HeatSolutionEvaluator& ev, double t,
                              const std::vector<Vec3>& cloud);

/// Same identities for an arbitrary source (used to show the identity fails
/// without radial symmetry). sum/trace defects still vanish; perm does not.
SymmetryReport symmetry_check_generic(const potential::PVRiesz& engine,
                                      const ScalarField& field,
                                      const std::vector<Vec3>& cloud);

// ---------------------------------------------------------------------------
// supercritical baseline: v = ln(1/(1-t)) Phi(x/sqrt(1-t)), Phi = curl X with
// X = e^{-1/(1-|x|^2)} e_3 inside the unit ball

struct BaselineReport {
    std::vector<double> t;
    std::vector<double> norm_32;   // ||F(., t_k)||_{L^{3/2}}  (grows like ln)
    std::vector<double> ratio_log; // norm_32 / ln(1/(1-t_k))
    std::vector<double> norm_14;   // ||F(., t_k)||_{L^{1.4}}  (stays bounded)
    double div_defect = 0.0;
};

Vec3 baseline_velocity(const Vec3& x, double t);
Vec3 baseline_force(const Vec3& x, double t);  // Delta v - dt v - (v.grad) v

BaselineReport baseline_supercritical(const TimeLadder& ladder,
                                      const SampleGrid& unit_grid);

}  // namespace nsblow::audit
