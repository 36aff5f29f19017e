#include <cmath>

#include "nsblow/audit/audit.hpp"

namespace nsblow::audit {

namespace {
double l2_norm(const ScalarField& mag, const SampleGrid& grid,
               double tail_decay, bool origin_refined) {
    LpNormOptions opt;
    opt.origin_refined = origin_refined;
    LpNormResult res = lp_norm(mag, 2.0, grid, tail_decay, opt);
    return res.value;
}
}  // namespace

EnergyReport energy_report(const potential::VelocityField& vf,
                           const TimeLadder& ladder, const SampleGrid& grid) {
    const heat::HeatSolutionEvaluator& ev = vf.source();
    EnergyReport rep;
    rep.t = ladder.levels;
    std::size_t n = ladder.levels.size();
    rep.v_l2.assign(n, 0.0);
    rep.v_dissipation.assign(n, 0.0);
    rep.h_l2.assign(n, 0.0);
    rep.h_dissipation.assign(n, 0.0);
    std::vector<double> dv2(n, 0.0), dh2(n, 0.0);  // squared gradient norms
    for (std::size_t k = 0; k < n; ++k) {
        double t = ladder.levels[k];
        if (t == 0.0) continue;  // everything vanishes at the initial time
        ScalarField vmag = [&](const Vec3& x) { return vf.velocity(x, t).norm(); };
        ScalarField gvmag = [&](const Vec3& x) {
            return vf.gradient(x, t).frobenius();
        };
        ScalarField hmag = [&](const Vec3& x) {
            return std::abs(ev.profile(t).value(x.norm()));
        };
        ScalarField ghmag = [&](const Vec3& x) {
            return std::abs(ev.profile(t).deriv(x.norm()));
        };
        rep.v_l2[k] = l2_norm(vmag, grid, 3.0, false);
        rep.h_l2[k] = l2_norm(hmag, grid, 8.0, false);
        double gv = l2_norm(gvmag, grid, 3.0, true);
        double gh = l2_norm(ghmag, grid, 8.0, true);
        dv2[k] = gv * gv;
        dh2[k] = gh * gh;
    }
    for (std::size_t k = 1; k < n; ++k) {
        double dt = ladder.levels[k] - ladder.levels[k - 1];
        rep.v_dissipation[k] =
            rep.v_dissipation[k - 1] + 0.5 * dt * (dv2[k] + dv2[k - 1]);
        rep.h_dissipation[k] =
            rep.h_dissipation[k - 1] + 0.5 * dt * (dh2[k] + dh2[k - 1]);
    }
    return rep;
}

NormSeries critical_norm_report(
    const std::function<Vec3(const Vec3&, double)>& force,
    const TimeLadder& ladder, const SampleGrid& grid, double p,
    double tail_decay, const LpNormOptions& opt) {
    NormSeries series;
    for (double t : ladder.levels) {
        ScalarField mag = [&](const Vec3& x) { return force(x, t).norm(); };
        LpNormResult res = lp_norm(mag, p, grid, tail_decay, opt);
        series.t.push_back(t);
        series.value.push_back(res.value);
        series.error.push_back(res.richardson_delta);
        series.tail.push_back(res.tail_estimate);
    }
    return series;
}

}  // namespace nsblow::audit
