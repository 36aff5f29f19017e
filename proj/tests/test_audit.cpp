#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsblow/audit/audit.hpp"

using namespace nsblow;
using namespace nsblow::audit;

namespace {
const heat::HeatSolutionEvaluator& evaluator_a() {
    static heat::HeatSolutionEvaluator ev(
        heat::make_profile(heat::Variant::CriticalA, 1.0));
    return ev;
}
const heat::HeatSolutionEvaluator& evaluator_b() {
    static heat::HeatSolutionEvaluator ev(
        heat::make_profile(heat::Variant::CriticalLogB, 1.0));
    return ev;
}
constexpr double kRateConst = 0.04753006925832032;  // radial-quadrature constant
}  // namespace

TEST_CASE("rate fit recovers exact synthetic slopes") {
    TimeLadder ladder = make_time_ladder(1.0, 12);
    RateFit lin = blowup_fit(
        [](double t) { return 2.0 * std::log(1.0 / (1.0 - t)); }, ladder,
        RateModel::Log);
    CHECK(lin.slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(lin.intercept == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(lin.monotone);
    RateFit dbl = blowup_fit(
        [](double t) {
            return 1.5 * std::log(std::log(1.0 / (1.0 - t))) + 0.3;
        },
        ladder, RateModel::LogLog);
    CHECK(dbl.slope == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(dbl.intercept == doctest::Approx(0.3).epsilon(1e-9));
    // a non-monotone series is still fitted but flagged
    RateFit wob = blowup_fit(
        [](double t) { return std::cos(40.0 * t); }, ladder, RateModel::Log);
    CHECK(!wob.monotone);
}

TEST_CASE("origin blow-up fits: log rate with certified lower envelope") {
    TimeLadder ladder = make_time_ladder(1.0, 12);
    RateFit fit = blowup_fit(
        [](double t) {
            return t == 0.0 ? 0.0 : evaluator_a().radial(0.0, t).u;
        },
        ladder, RateModel::Log);
    CHECK(fit.monotone);
    CHECK(fit.slope > 0.0);
    CHECK(fit.lower_const >= kRateConst * (1.0 - 0.02));
}

TEST_CASE("origin blow-up fits: doubly logarithmic variant") {
    TimeLadder ladder = make_time_ladder(1.0, 12);
    RateFit fit = blowup_fit(
        [](double t) {
            return t == 0.0 ? 0.0 : evaluator_b().radial(0.0, t).u;
        },
        ladder, RateModel::LogLog);
    CHECK(fit.monotone);
    CHECK(fit.lower_const > 0.0);
    // the lower envelope stabilizes: spread over k in [8, 12] within 20%
    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 8; k <= 12; ++k) {
        double m = std::log(std::log(1.0 / (1.0 - fit.series[k].first)));
        double r = fit.series[k].second / m;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK((hi - lo) / hi < 0.2);
}

TEST_CASE("sample clouds are deterministic and in range") {
    auto a = sample_cloud(42, 100, 4.0, 0.25, 1.0 - std::pow(2.0, -10.0));
    auto b = sample_cloud(42, 100, 4.0, 0.25, 1.0 - std::pow(2.0, -10.0));
    REQUIRE(a.size() == 100);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x.x == b[i].x.x);
        CHECK(a[i].t == b[i].t);
        CHECK(a[i].x.norm() <= 4.0 + 1e-12);
        CHECK(a[i].t >= 0.25 - 1e-12);
        CHECK(a[i].t <= 1.0 - std::pow(2.0, -10.0) + 1e-12);
    }
    auto c = sample_cloud(43, 100, 4.0, 0.25, 0.9);
    CHECK(c[0].x.x != a[0].x.x);
}

TEST_CASE("decay-envelope audits pass on held-out samples") {
    auto cloud = sample_cloud(7, 200, 4.0, 0.25, 1.0 - std::pow(2.0, -10.0));
    potential::VelocityField vf(evaluator_a());
    for (BoundId id : {BoundId::SolutionDecay, BoundId::GradientDecay,
                       BoundId::HessianDecay, BoundId::VelocityDecay,
                       BoundId::VelocityGradientDecay}) {
        BoundAudit audit = bound_audit(vf, id, cloud);
        CHECK(audit.pass);
        CHECK(audit.fitted_C > 0.0);
        CHECK(audit.worst_margin >= 0.0);
    }
}

TEST_CASE("halving the fitted constant breaks the velocity envelope") {
    auto cloud = sample_cloud(7, 400, 4.0, 0.25, 1.0 - std::pow(2.0, -10.0));
    potential::VelocityField vf(evaluator_a());
    // slack 1.5 with C halved is equivalent to slack 0.75 with the full C
    BoundAudit broken = bound_audit(vf, BoundId::VelocityDecay, cloud, 0.75);
    CHECK(!broken.pass);
    CHECK(broken.worst_margin < 0.0);
}

TEST_CASE("small-data flow envelopes scale linearly in the amplitude") {
    auto cloud = sample_cloud(11, 120, 4.0, 0.25, 1.0 - std::pow(2.0, -10.0));
    heat::HeatSolutionEvaluator z1(
        heat::make_profile(heat::Variant::ScaledLogB, 1.0, 0.01));
    heat::HeatSolutionEvaluator z2(
        heat::make_profile(heat::Variant::ScaledLogB, 1.0, 0.02));
    potential::VelocityField v1(z1), v2(z2);
    for (BoundId id : {BoundId::StokesDecay, BoundId::StokesGradientDecay}) {
        BoundAudit a1 = bound_audit(v1, id, cloud);
        BoundAudit a2 = bound_audit(v2, id, cloud);
        CHECK(a1.pass);
        CHECK(a2.pass);
        CHECK(a2.fitted_C / a1.fitted_C == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("symmetry identities hold through the singular-integral route") {
    std::vector<Vec3> cloud;
    auto pts = sample_cloud(5, 50, 3.0, 0.5, 0.9);
    for (const auto& p : pts) cloud.push_back(p.x);
    SymmetryReport rep = symmetry_check(evaluator_a(), 0.75, cloud);
    CHECK(rep.perm_defect < 1e-6);
    CHECK(rep.sum_defect < 1e-4);
    CHECK(rep.trace_defect < 1e-4);
}

TEST_CASE("permutation identity fails for a non-radial source") {
    potential::PVRiesz engine(evaluator_a(), 0.75);
    ScalarField skew = [](const Vec3& x) {
        return std::exp(-x.norm2()) * x.x;
    };
    std::vector<Vec3> cloud{{0.8, 0.4, -0.2}, {1.2, -0.6, 0.3}};
    SymmetryReport rep = symmetry_check_generic(engine, skew, cloud);
    CHECK(rep.perm_defect > 0.01);
    // the trace identity is immune to the asymmetry
    CHECK(rep.trace_defect < 1e-4);
}

TEST_CASE("energy report: zeros at the initial time, finite and cumulative") {
    TimeLadder ladder = make_time_ladder(1.0, 5);
    SampleGrid grid = make_sample_grid(8.0, 32);
    potential::VelocityField vf(evaluator_a());
    EnergyReport rep = energy_report(vf, ladder, grid);
    CHECK(rep.v_l2[0] == 0.0);
    CHECK(rep.h_l2[0] == 0.0);
    CHECK(rep.v_dissipation[0] == 0.0);
    for (std::size_t k = 1; k < rep.t.size(); ++k) {
        CHECK(rep.v_l2[k] > 0.0);
        CHECK(std::isfinite(rep.v_l2[k]));
        CHECK(rep.h_l2[k] > 0.0);
        CHECK(rep.v_dissipation[k] >= rep.v_dissipation[k - 1]);
        CHECK(rep.h_dissipation[k] > rep.h_dissipation[k - 1]);
    }
}

TEST_CASE("critical norm series: zero force gives zeros") {
    TimeLadder ladder = make_time_ladder(1.0, 4);
    SampleGrid grid = make_sample_grid(8.0, 24);
    NormSeries s = critical_norm_report(
        [](const Vec3&, double) { return Vec3{}; }, ladder, grid);
    for (double v : s.value) CHECK(v == 0.0);
}

TEST_CASE("supercritical baseline: scaling-exact norm series") {
    TimeLadder ladder = make_time_ladder(1.0, 12);
    SampleGrid grid = make_sample_grid(1.2, 48);
    BaselineReport rep = baseline_supercritical(ladder, grid);
    CHECK(rep.div_defect < 1e-8);
    // the critical norm grows like the log factor: ratio stabilizes to 15%
    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 6; k <= 12; ++k) {
        lo = std::min(lo, rep.ratio_log[k]);
        hi = std::max(hi, rep.ratio_log[k]);
    }
    CHECK(lo > 0.0);
    CHECK((hi - lo) / hi < 0.15);
    // the slightly subcritical norm stays within a factor 2
    lo = 1e300;
    hi = 0.0;
    for (std::size_t k = 6; k <= 12; ++k) {
        lo = std::min(lo, rep.norm_14[k]);
        hi = std::max(hi, rep.norm_14[k]);
    }
    CHECK(hi / lo <= 2.0);
}
