#include "nsblow/audit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nsblow::audit {

namespace {
double model_value(RateModel model, double T, double t) {
    double m = std::log(1.0 / (T - t));
    return model == RateModel::Log ? m : std::log(m);
}
}  // namespace

RateFit blowup_fit(const std::function<double(double)>& value_at,
                   const TimeLadder& ladder, RateModel model) {
    if (ladder.levels.size() < 7)
        throw std::invalid_argument("blowup_fit: ladder too shallow");
    RateFit fit;
    fit.model = model;
    for (double t : ladder.levels) fit.series.emplace_back(t, value_at(t));
    for (std::size_t k = 1; k + 1 < fit.series.size(); ++k)
        if (fit.series[k + 1].second < fit.series[k].second) fit.monotone = false;
    // least squares over k >= 4
    double sm = 0.0, sv = 0.0, smm = 0.0, smv = 0.0, n = 0.0;
    for (std::size_t k = 4; k < fit.series.size(); ++k) {
        double m = model_value(model, ladder.T, fit.series[k].first);
        double v = fit.series[k].second;
        sm += m;
        sv += v;
        smm += m * m;
        smv += m * v;
        n += 1.0;
    }
    double det = n * smm - sm * sm;
    fit.slope = (n * smv - sm * sv) / det;
    fit.intercept = (sv * smm - sm * smv) / det;
    fit.lower_const = std::numeric_limits<double>::infinity();
    for (std::size_t k = 6; k < fit.series.size(); ++k) {
        double m = model_value(model, ladder.T, fit.series[k].first);
        fit.lower_const = std::min(fit.lower_const, fit.series[k].second / m);
    }
    return fit;
}

std::vector<SpaceTimePoint> sample_cloud(unsigned seed, std::size_t count,
                                         double r_max, double t_min,
                                         double t_max, double T) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    // times quantized to a geometric approach of T
    double u_lo = std::log2(1.0 / (T - t_min));
    double u_hi = std::log2(1.0 / (T - t_max));
    const int n_levels = 16;
    std::vector<SpaceTimePoint> cloud;
    cloud.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double mu = 2.0 * uni(rng) - 1.0;
        double ph = 2.0 * M_PI * uni(rng);
        double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        double r = r_max * uni(rng);
        Vec3 x{r * sn * std::cos(ph), r * sn * std::sin(ph), r * mu};
        int lev = std::min<int>(n_levels - 1,
                                static_cast<int>(uni(rng) * n_levels));
        double u = u_lo + (u_hi - u_lo) * lev / (n_levels - 1.0);
        cloud.push_back({x, T - std::pow(2.0, -u)});
    }
    return cloud;
}

namespace {
struct Envelope {
    std::function<double(const SpaceTimePoint&)> value;
    std::function<double(const SpaceTimePoint&)> bound;  // C = 1 shape
};

Envelope make_envelope(const potential::VelocityField& vf, BoundId id) {
    const heat::HeatSolutionEvaluator& ev = vf.source();
    double T = ev.T();
    const double c_gauss = 0.2;
    auto gauss = [c_gauss](double rho) { return std::exp(-c_gauss * rho * rho); };
    auto log_factor = [T](const SpaceTimePoint& p) {
        return 1.0 + std::abs(std::log(p.x.norm2() + (T - p.t)));
    };
    auto near_factor = [T](const SpaceTimePoint& p) {
        return 1.0 + 1.0 / (p.x.norm() + std::sqrt(T - p.t));
    };
    auto cone_log = [T](const SpaceTimePoint& p) {
        double rho = p.x.norm();
        return 1.0 + std::log(1.0 + rho * rho * rho / std::pow(T - p.t, 1.5));
    };
    switch (id) {
        case BoundId::SolutionDecay:
            return {[&ev](const SpaceTimePoint& p) {
                        return std::abs(ev.h1(p.x, p.t));
                    },
                    [=](const SpaceTimePoint& p) {
                        return gauss(p.x.norm()) * log_factor(p);
                    }};
        case BoundId::GradientDecay:
            return {[&ev](const SpaceTimePoint& p) {
                        return ev.grad_h1(p.x, p.t).norm();
                    },
                    [=](const SpaceTimePoint& p) {
                        return gauss(p.x.norm()) * near_factor(p);
                    }};
        case BoundId::HessianDecay:
            return {[&ev](const SpaceTimePoint& p) {
                        return ev.hess_h1(p.x, p.t).frobenius();
                    },
                    [=](const SpaceTimePoint& p) {
                        return gauss(p.x.norm()) /
                               (p.x.norm2() + (T - p.t)) * cone_log(p);
                    }};
        case BoundId::VelocityDecay:
        case BoundId::StokesDecay:
            return {[&vf](const SpaceTimePoint& p) {
                        return vf.velocity(p.x, p.t).norm();
                    },
                    [=](const SpaceTimePoint& p) {
                        return log_factor(p) / (1.0 + p.x.norm2());
                    }};
        case BoundId::VelocityGradientDecay:
        case BoundId::StokesGradientDecay:
            return {[&vf](const SpaceTimePoint& p) {
                        return vf.gradient(p.x, p.t).frobenius();
                    },
                    [=](const SpaceTimePoint& p) {
                        return near_factor(p) * cone_log(p) /
                               (1.0 + p.x.norm2());
                    }};
    }
    throw std::invalid_argument("bound_audit: unknown inequality id");
}
}  // namespace

BoundAudit bound_audit(const potential::VelocityField& vf, BoundId id,
                       const std::vector<SpaceTimePoint>& cloud, double slack) {
    if (cloud.size() < 8)
        throw std::invalid_argument("bound_audit: cloud too small");
    BoundAudit audit;
    audit.id = id;
    audit.cloud = cloud;
    audit.fitted_c = 0.2;
    Envelope env = make_envelope(vf, id);
    std::vector<double> vals(cloud.size()), bounds(cloud.size());
    parallel_for(cloud.size(), [&](std::size_t i) {
        vals[i] = env.value(cloud[i]);
        bounds[i] = env.bound(cloud[i]);
    });
    for (std::size_t i = 0; i < cloud.size(); i += 2)
        audit.fitted_C = std::max(audit.fitted_C, vals[i] / bounds[i]);
    audit.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < cloud.size(); i += 2) {
        double allowed = slack * audit.fitted_C * bounds[i];
        audit.worst_margin = std::min(audit.worst_margin, allowed - vals[i]);
    }
    audit.pass = audit.worst_margin >= 0.0;
    return audit;
}

namespace {
SymmetryReport symmetry_impl(
    const std::function<double(int, int, const Vec3&)>& second,
    const std::function<double(const Vec3&)>& local,
    const std::vector<Vec3>& cloud) {
    SymmetryReport rep;
    for (const Vec3& x : cloud) {
        Vec3 xs{x.y, x.x, x.z};
        double d11 = second(0, 0, x), d22 = second(1, 1, x),
               d33 = second(2, 2, x);
        double g23 = d22 + d33, g13 = d11 + d33, g12 = d11 + d22;
        double g13_swapped = second(0, 0, xs) + second(2, 2, xs);
        double h = local(x);
        rep.perm_defect =
            std::max(rep.perm_defect, std::abs(g23 - g13_swapped));
        rep.sum_defect =
            std::max(rep.sum_defect, std::abs(g23 + g13 + g12 + 2.0 * h));
        rep.trace_defect =
            std::max(rep.trace_defect, std::abs(d11 + d22 + d33 + h));
    }
    return rep;
}
}  // namespace

SymmetryReport symmetry_check(const heat::HeatSolutionEvaluator& ev, double t,
                              const std::vector<Vec3>& cloud) {
    potential::PVRiesz pv(ev, t);
    const heat::RadialProfile& prof = ev.profile(t);
    return symmetry_impl(
        [&pv](int i, int j, const Vec3& x) { return pv.second(i, j, x); },
        [&prof](const Vec3& x) { return prof.value(x.norm()); }, cloud);
}

SymmetryReport symmetry_check_generic(const potential::PVRiesz& engine,
                                      const ScalarField& field,
                                      const std::vector<Vec3>& cloud) {
    return symmetry_impl(
        [&](int i, int j, const Vec3& x) {
            return engine.second_generic(field, i, j, x, field(x));
        },
        field, cloud);
}

}  // namespace nsblow::audit
