#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsblow/heat/forcing.hpp"
#include "nsblow/heat/heat_solution.hpp"

using namespace nsblow;
using namespace nsblow::heat;

namespace {
const ForcingProfile kA = make_profile(Variant::CriticalA, 1.0);
const ForcingProfile kB = make_profile(Variant::CriticalLogB, 1.0);
}  // namespace

TEST_CASE("forcing density closed forms") {
    // plain variant at q=0, c=0.5: e^0 / 0.5 = 2
    CHECK(density(0.0, 0.5, false).v == doctest::Approx(2.0).epsilon(1e-15));
    // log variant at q+c=1 has no log penalty
    CHECK(density(0.25, 0.75, true).v ==
          doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
    // q-derivatives against central differences
    for (bool lg : {false, true}) {
        for (double q : {0.3, 2.0}) {
            double c = 0.4, h = 1e-6;
            auto d = density(q, c, lg);
            double fd1 = (density(q + h, c, lg).v - density(q - h, c, lg).v) / (2 * h);
            double fd2 = (density(q + h, c, lg).d1 - density(q - h, c, lg).d1) / (2 * h);
            CHECK(d.d1 == doctest::Approx(fd1).epsilon(1e-8));
            CHECK(d.d2 == doctest::Approx(fd2).epsilon(1e-7));
        }
    }
    Vec3 f = forcing_eval(kA, {{1.0, 0.0, 0.0}, 0.5});
    CHECK(f.x == doctest::Approx(-std::exp(-1.0) / 1.5).epsilon(1e-15));
    CHECK(f.y == 0.0);
    CHECK_THROWS_AS(forcing_eval(kA, {{0, 0, 0}, 1.0}), std::invalid_argument);
}

TEST_CASE("duhamel solution matches reference values") {
    HeatSolutionEvaluator ev(kA, 1e-8);
    // reference values from an independent adaptive-quadrature implementation
    CHECK(ev.h1({0, 0, 0}, 0.5) == doctest::Approx(0.21442534082676548).epsilon(2e-9));
    CHECK(ev.h1({0, 0, 0}, 0.75) == doctest::Approx(0.33812430786188075).epsilon(2e-9));
    CHECK(ev.h1({0, 0, 0}, 0.9) == doctest::Approx(0.5105860693946894).epsilon(2e-9));
    CHECK(ev.h1({0.5, 0, 0}, 0.75) == doctest::Approx(0.2393239779296305).epsilon(2e-9));
    CHECK(ev.h1({0, 1.0, 0}, 0.5) == doctest::Approx(0.07799509499171207).epsilon(2e-9));
    CHECK(ev.h1({0.5, 0, 0}, 0.5) == doctest::Approx(0.15987038426108155).epsilon(2e-9));
    CHECK(ev.h1({0, 0, 2.0}, 0.9) == doctest::Approx(0.02377647312159561).epsilon(2e-9));

    HeatSolutionEvaluator evb(kB, 1e-8);
    CHECK(evb.h1({0.5, 0, 0}, 0.75) ==
          doctest::Approx(0.16848853583480497).epsilon(2e-9));

    // radial derivative against an independent reference value
    CHECK(ev.radial(0.5, 0.75).du ==
          doctest::Approx(-0.2902900588598785).epsilon(1e-7));
}

TEST_CASE("solution is positive, radially decreasing, increasing in time") {
    HeatSolutionEvaluator ev(kA, 1e-8);
    double prev = 1e9;
    for (double r : {0.0, 0.25, 0.75, 1.5, 3.0}) {
        auto d = ev.radial(r, 0.75);
        CHECK(d.u > 0.0);
        CHECK(d.u < prev);
        if (r > 0.0) CHECK(d.du < 0.0);
        prev = d.u;
    }
    CHECK(ev.h1({0.3, 0, 0}, 0.6) > ev.h1({0.3, 0, 0}, 0.4));
    // origin derivative data: U'(0) = 0, U''(0) < 0 (max at the origin)
    auto d0 = ev.radial(0.0, 0.75);
    CHECK(d0.du == 0.0);
    CHECK(d0.d2u < 0.0);
}

TEST_CASE("gradient and hessian agree with finite differences") {
    HeatSolutionEvaluator ev(kA, 1e-9);
    Vec3 x{0.4, -0.3, 0.5};
    double t = 0.75, h = 0.02;
    Vec3 g = ev.grad_h1(x, t);
    Mat3 hess = ev.hess_h1(x, t);
    auto f = [&](const Vec3& y, double s) { return ev.h1(y, s); };
    Vec3 gfd = fd_gradient(f, x, t, h);
    CHECK(g.x == doctest::Approx(gfd.x).epsilon(2e-7));
    CHECK(g.y == doctest::Approx(gfd.y).epsilon(2e-7));
    CHECK(g.z == doctest::Approx(gfd.z).epsilon(2e-7));
    for (int i = 0; i < 3; ++i) {
        auto gi = [&](const Vec3& y, double s) { return ev.grad_h1(y, s)[i]; };
        Vec3 row = fd_gradient(gi, x, t, h);
        for (int j = 0; j < 3; ++j)
            CHECK(hess(i, j) == doctest::Approx(row[j]).epsilon(5e-6));
    }
    CHECK(hess(0, 1) == doctest::Approx(hess(1, 0)).epsilon(1e-12));
}

TEST_CASE("radial profile spline tracks the direct quadrature") {
    HeatSolutionEvaluator ev(kA, 1e-8);
    const RadialProfile& prof = ev.profile(0.875);
    for (double r : {0.0, 0.001, 0.04, 0.3, 1.0, 2.5, 6.0}) {
        auto ref = ev.radial(r, 0.875);
        CHECK(prof.value(r) == doctest::Approx(ref.u).epsilon(1e-8));
        CHECK(prof.deriv(r) == doctest::Approx(ref.du).epsilon(1e-7));
        CHECK(prof.second(r) == doctest::Approx(ref.d2u).epsilon(1e-4));
    }
    CHECK(prof.value(20.0) == 0.0);
}

TEST_CASE("log variant near the final time") {
    HeatSolutionEvaluator evb(kB, 1e-8);
    double T = 1.0;
    double t = T - std::ldexp(1.0, -10);
    auto d = evb.radial(0.0, t);
    CHECK(d.u > 0.0);
    CHECK(std::isfinite(d.d2u));
    const RadialProfile& prof = evb.profile(t);
    auto ref = evb.radial(0.02, t);
    CHECK(prof.value(0.02) == doctest::Approx(ref.u).epsilon(1e-6));
}

TEST_CASE("scaled variant is linear in delta") {
    HeatSolutionEvaluator ev1(make_profile(Variant::ScaledLogB, 1.0, 1.0), 1e-8);
    HeatSolutionEvaluator evd(make_profile(Variant::ScaledLogB, 1.0, 0.25), 1e-8);
    double a = ev1.h1({0.3, 0.1, 0}, 0.75);
    double b = evd.h1({0.3, 0.1, 0}, 0.75);
    CHECK(b == doctest::Approx(0.25 * a).epsilon(1e-12));
}

TEST_CASE("pde residual by finite differences is small and scales") {
    HeatSolutionEvaluator ev(kA, 1e-11);
    std::vector<SpaceTimePoint> cloud = {
        {{0.0, 0.0, 0.0}, 0.5},  {{0.5, 0.0, 0.0}, 0.5},
        {{0.0, 0.8, 0.3}, 0.75}, {{1.2, 0.0, 0.0}, 0.6},
    };
    auto rep = heat_residual(ev, cloud, 0.04, 1e-3);
    CHECK(rep.max_relative < 1e-3);
    auto rep2 = heat_residual(ev, cloud, 0.02, 5e-4);
    CHECK(rep2.max_relative < rep.max_relative / 8.0);
}

TEST_CASE("accuracy certificate rejects a hopeless budget") {
    HeatQuad crude;
    crude.gl_time = 2;
    crude.gl_space = 2;
    HeatSolutionEvaluator ev(kA, 1e-13, crude);
    CHECK_THROWS_AS(ev.radial(0.5, 0.9), AccuracyError);
}

TEST_CASE("domain validation") {
    HeatSolutionEvaluator ev(kA, 1e-8);
    CHECK_THROWS_AS(ev.h1({0, 0, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ev.h1({0, 0, 0}, -0.1), std::invalid_argument);
    CHECK(ev.h1({0.3, 0, 0}, 0.0) == 0.0);
}
