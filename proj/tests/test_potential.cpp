#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsblow/fields/lp_norm.hpp"
#include "nsblow/heat/heat_solution.hpp"
#include "nsblow/potential/radial_potential.hpp"
#include "nsblow/potential/riesz.hpp"
#include "nsblow/potential/velocity.hpp"

using namespace nsblow;
using namespace nsblow::potential;

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
}  // namespace

TEST_CASE("newton potential at the origin matches the frozen reference") {
    RadialPotential pot(evaluator_a(), 0.5);
    CHECK(newton_potential(pot, 0.0) ==
          doctest::Approx(0.12136652362213522).epsilon(1e-8));
    // monopole far field: rho * Phi -> total mass integral
    CHECK(newton_potential(pot, 40.0) * 40.0 ==
          doctest::Approx(pot.m_inf()).epsilon(1e-10));
}

TEST_CASE("radial potential data is consistent with the heat solution") {
    RadialPotential pot(evaluator_a(), 0.75);
    for (double rho : {0.0, 0.3, 1.0, 2.5, 6.0}) {
        RadialPotentialData d = pot.data(rho);
        heat::RadialDerivs u = evaluator_a().radial(rho, 0.75);
        CHECK(d.u == doctest::Approx(u.u).epsilon(1e-7));
        CHECK(d.du == doctest::Approx(u.du).epsilon(1e-6));
        // trace of the Hessian is -U: A + 3 pp = A - 3m = -U
        CHECK(d.big_a - 3.0 * d.m == doctest::Approx(-u.u).epsilon(1e-6));
    }
    // m(0) = U(0)/3
    CHECK(pot.data(0.0).m ==
          doctest::Approx(evaluator_a().radial(0.0, 0.75).u / 3.0).epsilon(1e-8));
}

TEST_CASE("potential Hessian matches finite differences of Phi") {
    RadialPotential pot(evaluator_a(), 0.5);
    auto phi = [&](double rho) { return newton_potential(pot, rho); };
    double h = 1e-3;
    for (double rho : {0.4, 1.2, 3.0}) {
        double d1 = (phi(rho + h) - phi(rho - h)) / (2.0 * h);
        double d2 = (phi(rho + h) - 2.0 * phi(rho) + phi(rho - h)) / (h * h);
        RadialPotentialData d = pot.data(rho);
        CHECK(d1 == doctest::Approx(-d.m * rho).epsilon(1e-6));
        // radial second derivative = A + pp
        CHECK(d2 == doctest::Approx(d.big_a - d.m).epsilon(1e-4));
    }
}

TEST_CASE("pressure matches the frozen reference and its closed-form slope") {
    const auto& prof = evaluator_a().forcing();
    CHECK(pressure_eval(prof, {1.0, 0.0, 0.0}, 0.5) ==
          doctest::Approx(0.1987891663988308).epsilon(1e-10));
    // oddness in x1, invariance under x2 <-> x3
    CHECK(pressure_eval(prof, {-1.0, 0.0, 0.0}, 0.5) ==
          doctest::Approx(-0.1987891663988308).epsilon(1e-10));
    CHECK(pressure_eval(prof, {0.4, 0.7, -0.2}, 0.6) ==
          doctest::Approx(pressure_eval(prof, {0.4, -0.2, 0.7}, 0.6)));
    // gradient vs finite differences
    Vec3 x{0.8, -0.3, 0.5};
    Vec3 g = pressure_grad(prof, x, 0.5);
    double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
        Vec3 xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd =
            (pressure_eval(prof, xp, 0.5) - pressure_eval(prof, xm, 0.5)) /
            (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-7));
    }
    // origin behavior P ~ g(0) x1 / 3
    double g0 = pressure_radial(prof, 0.0, 0.5).g;
    CHECK(pressure_eval(prof, {1e-4, 0.0, 0.0}, 0.5) ==
          doctest::Approx(g0 * 1e-4 / 3.0).epsilon(1e-6));
}

TEST_CASE("pressure reduction audit: unreduced form agrees pointwise") {
    VelocityField vf(evaluator_a());
    const auto& prof = evaluator_a().forcing();
    std::vector<Vec3> pts{{0.5, 0.0, 0.0},  {1.0, 0.5, -0.3}, {0.2, 0.2, 0.2},
                          {2.0, -1.0, 0.5}, {0.0, 1.0, 0.0},  {1.5, 0.0, 0.0},
                          {-0.7, 0.4, 1.1}, {3.0, 0.0, 0.0},  {0.1, -0.1, 0.0},
                          {1.0, 1.0, 1.0}};
    for (const Vec3& x : pts) {
        double reduced = pressure_eval(prof, x, 0.6);
        double unreduced = pressure_eval_unreduced(vf, x, 0.6);
        CHECK(unreduced == doctest::Approx(reduced).epsilon(2e-5));
    }
}

TEST_CASE("velocity at the origin and divergence-free structure") {
    VelocityField vf(evaluator_a());
    Vec3 v0 = vf.velocity({0.0, 0.0, 0.0}, 0.9);
    double u0 = evaluator_a().radial(0.0, 0.9).u;
    CHECK(v0.x == doctest::Approx(2.0 / 3.0 * u0).epsilon(1e-8));
    CHECK(v0.y == doctest::Approx(0.0));
    CHECK(v0.z == doctest::Approx(0.0));
    // divergence vanishes identically for the radial route
    for (double t : {0.3, 0.75}) {
        for (const Vec3& x : {Vec3{0.5, 0.2, -0.1}, Vec3{1.5, -1.0, 2.0}}) {
            Mat3 g = vf.gradient(x, t);
            CHECK(g.trace() == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("velocity gradient matches finite differences of the velocity") {
    VelocityField vf(evaluator_a());
    double t = 0.5, h = 1e-4;
    for (const Vec3& x : {Vec3{0.6, -0.2, 0.3}, Vec3{1.8, 0.9, -0.5}}) {
        Mat3 g = vf.gradient(x, t);
        for (int j = 0; j < 3; ++j) {
            Vec3 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Vec3 fd = (vf.velocity(xp, t) - vf.velocity(xm, t)) * (0.5 / h);
            for (int i = 0; i < 3; ++i)
                CHECK(g(i, j) == doctest::Approx(fd[i]).epsilon(1e-5));
        }
    }
}

TEST_CASE("PV route reproduces the origin trace pair") {
    PVRiesz pv(evaluator_a(), 0.9);
    Vec3 zero{0.0, 0.0, 0.0};
    double pair = pv.second(1, 1, zero) + pv.second(2, 2, zero);
    CHECK(pair == doctest::Approx(-0.34039071292979295).epsilon(5e-5));
    // trace identity: sum of diagonal seconds equals -h1
    double tr =
        pv.second(0, 0, zero) + pv.second(1, 1, zero) + pv.second(2, 2, zero);
    CHECK(tr == doctest::Approx(-evaluator_a().radial(0.0, 0.9).u).epsilon(5e-5));
}

TEST_CASE("PV, Fourier and radial routes agree off the origin") {
    double t = 0.75;
    PVRiesz pv(evaluator_a(), t);
    FourierRiesz fr(evaluator_a(), t);
    RadialPotential pot(evaluator_a(), t);
    for (const Vec3& raw : {Vec3{0.9, 0.3, -0.4}, Vec3{1.5, 0.0, 0.75}}) {
        Vec3 x = fr.snap(raw);
        double rho = x.norm();
        RadialPotentialData d = pot.data(rho);
        Vec3 n = x * (1.0 / rho);
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                double exact = d.big_a * n[i] * n[j] - (i == j ? d.m : 0.0);
                double a = pv.second(i, j, x);
                double b = fr.second(i, j, x);
                CHECK(std::abs(a - exact) < pv.error_budget());
                CHECK(std::abs(b - exact) < fr.error_budget());
                CHECK(riesz_second_checked(pv, fr, i, j, x) ==
                      doctest::Approx(a));
            }
        }
    }
}

TEST_CASE("PV and Fourier velocity routes match the radial velocity") {
    double t = 0.75;
    VelocityField radial(evaluator_a());
    VelocityField pv(evaluator_a(), RieszMethod::PV);
    VelocityField fourier(evaluator_a(), RieszMethod::Fourier);
    FourierRiesz fr(evaluator_a(), t);
    Vec3 x = fr.snap({0.75, -0.375, 0.5625});
    Vec3 v = radial.velocity(x, t);
    Vec3 vp = pv.velocity(x, t);
    Vec3 vf4 = fourier.velocity(x, t);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(vp[i] - v[i]) < 2.0 * 5e-5);
        CHECK(std::abs(vf4[i] - v[i]) < 2.0 * 3e-4);
    }
    // gradients through the third-kernel route
    Mat3 g = radial.gradient(x, t);
    Mat3 gp = pv.gradient(x, t);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(gp(i, j) - g(i, j)) < 1e-3);
}

TEST_CASE("critical norm of the log-damped source at t = 0") {
    const auto& prof = evaluator_b().forcing();
    ScalarField mag = [&](const Vec3& x) {
        return heat::forcing_eval(prof, {x, 0.0}).norm();
    };
    SampleGrid grid = make_sample_grid(12.0, 96);
    LpNormResult res = lp_norm(mag, 1.5, grid, 6.0);
    CHECK(!res.tail_divergent);
    CHECK(res.value == doctest::Approx(0.8835314311047865).epsilon(2e-3));
}

TEST_CASE("cutoff function: support, values and derivative consistency") {
    CutoffSpec cs{1.0};
    CHECK(cs.phi({0.5, 0.0, 0.0}, 0.75) == doctest::Approx(1.0));
    CHECK(cs.phi({2.5, 0.0, 0.0}, 0.75) == doctest::Approx(0.0));
    CHECK(cs.phi({0.5, 0.0, 0.0}, 0.1) == doctest::Approx(0.0));
    Vec3 x{1.4, 0.3, -0.2};
    double t = 0.6, h = 1e-5;
    Vec3 g = cs.grad_phi(x, t);
    Mat3 hp = cs.hess_phi(x, t);
    for (int i = 0; i < 3; ++i) {
        Vec3 xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        CHECK(g[i] == doctest::Approx((cs.phi(xp, t) - cs.phi(xm, t)) /
                                      (2.0 * h))
                          .epsilon(1e-6));
        for (int j = 0; j < 3; ++j) {
            double fd =
                (cs.grad_phi(xp, t)[j] - cs.grad_phi(xm, t)[j]) / (2.0 * h);
            CHECK(hp(j, i) == doctest::Approx(fd).epsilon(1e-5));
        }
        double fd_lap =
            (cs.lap_phi(xp, t) - cs.lap_phi(xm, t)) / (2.0 * h);
        CHECK(cs.grad_lap_phi(x, t)[i] == doctest::Approx(fd_lap).epsilon(1e-4));
    }
    CHECK(hp.trace() == doctest::Approx(cs.lap_phi(x, t)).epsilon(1e-10));
    CHECK(cs.dt_phi(x, t) ==
          doctest::Approx((cs.phi(x, t + h) - cs.phi(x, t - h)) / (2.0 * h))
              .epsilon(1e-6));
}

TEST_CASE("cutoff velocity: truncation, compact support, divergence-free") {
    CutoffSpec cs{1.0};
    VelocityField vf(evaluator_a(), RieszMethod::Radial, cs);
    VelocityField plain(evaluator_a());
    double t = 0.75;
    // inside the unit ball the cutoff is inactive after T/2
    Vec3 inner{0.4, 0.1, -0.2};
    Vec3 a = vf.velocity(inner, t), b = plain.velocity(inner, t);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]));
    // outside radius 2 the construction vanishes
    Vec3 outer{2.4, 0.5, 0.0};
    CHECK(vf.velocity(outer, t).norm() == doctest::Approx(0.0));
    CHECK(vf.gradient(outer, t).frobenius() == doctest::Approx(0.0));
    // divergence-free everywhere, including the transition shell
    for (const Vec3& x : {Vec3{1.3, 0.4, -0.6}, Vec3{1.9, 0.0, 0.1}}) {
        CHECK(vf.gradient(x, t).trace() == doctest::Approx(0.0).epsilon(1e-12));
        // gradient consistency against finite differences in the shell
        double h = 1e-4;
        Mat3 g = vf.gradient(x, t);
        for (int j = 0; j < 3; ++j) {
            Vec3 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Vec3 fd = (vf.velocity(xp, t) - vf.velocity(xm, t)) * (0.5 / h);
            for (int i = 0; i < 3; ++i)
                CHECK(g(i, j) == doctest::Approx(fd[i]).epsilon(1e-5));
        }
    }
}

TEST_CASE("lower-order force is supported away from the late-time unit ball") {
    CutoffSpec cs{1.0};
    VelocityField vf(evaluator_a(), RieszMethod::Radial, cs);
    // inside B(0,1) and t >= T/2: all cutoff derivatives vanish and phi = 1
    CHECK(fb_eval(vf, {0.5, 0.2, 0.0}, 0.75).norm() == doctest::Approx(0.0));
    // early times: the time ramp contributes even at the origin region
    CHECK(fb_eval(vf, {0.5, 0.2, 0.0}, 0.3).norm() > 0.0);
    // far field: reduces to -grad P
    Vec3 far{3.0, 1.0, -0.5};
    Vec3 fb = fb_eval(vf, far, 0.75);
    Vec3 gp = pressure_grad(evaluator_a().forcing(), far, 0.75);
    for (int i = 0; i < 3; ++i) CHECK(fb[i] == doctest::Approx(-gp[i]));
}

TEST_CASE("truncated construction solves the forced equations") {
    CutoffSpec cs{1.0};
    VelocityField vf(evaluator_a(), RieszMethod::Radial, cs);
    auto force = [&](const Vec3& x, double t) { return force_assemble(vf, x, t); };
    std::vector<SpaceTimePoint> cloud{{{0.4, 0.1, -0.2}, 0.55},
                                      {{1.4, 0.5, 0.3}, 0.55},
                                      {{1.7, -0.8, 0.0}, 0.8},
                                      {{0.9, 0.9, 0.9}, 0.8}};
    // finer space step: the cutoff shell has steep derivatives near its edges
    NsResidualReport rep = ns_residual(vf, cloud, force, true, 0.01);
    CHECK(rep.max_relative < 1e-3);
}

TEST_CASE("global construction solves the forced equations") {
    VelocityField vf(evaluator_b());
    auto force = [&](const Vec3& x, double t) { return force_assemble(vf, x, t); };
    std::vector<SpaceTimePoint> cloud{{{0.5, 0.0, 0.0}, 0.5},
                                      {{1.0, 0.7, -0.4}, 0.5},
                                      {{0.2, -0.3, 0.6}, 0.875},
                                      {{2.5, 1.0, 0.0}, 0.875}};
    NsResidualReport rep = ns_residual(vf, cloud, force);
    CHECK(rep.max_relative < 1e-3);
}
