#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsblow/stokes/picard.hpp"
#include "nsblow/stokes/stokes.hpp"

using namespace nsblow;
using namespace nsblow::stokes;

namespace {
const heat::HeatSolutionEvaluator& evaluator_b() {
    static heat::HeatSolutionEvaluator ev(
        heat::make_profile(heat::Variant::CriticalLogB, 1.0));
    return ev;
}
const potential::VelocityField& base_velocity_b() {
    static potential::VelocityField vf(evaluator_b());
    return vf;
}
}  // namespace

TEST_CASE("propagator basics: zero force, gradient annihilation") {
    StokesPropagator prop(8.0, 32);
    VectorGrid zero = prop.duhamel(
        [](const Vec3&, double) { return Vec3{}; }, 0.5, 8, 4);
    CHECK(zero.max_norm() == 0.0);
    // gradient fields are annihilated by the divergence-free projection;
    // use a band-limited potential so sampling introduces no aliasing
    double a = M_PI / 8.0 * 2.0, b = M_PI / 8.0 * 3.0;
    VectorGrid grad = prop.duhamel(
        [a, b](const Vec3& x, double) {
            return Vec3{-a * std::sin(a * x.x) * std::cos(b * x.y),
                        -b * std::cos(a * x.x) * std::sin(b * x.y), 0.0};
        },
        0.5, 8, 4);
    CHECK(grad.max_norm() < 1e-12);
}

TEST_CASE("propagator reduces to the heat semigroup on solenoidal data") {
    double L = 8.0;
    StokesPropagator prop(L, 32);
    // F = (sin(a x2), 0, 0): divergence-free eigenfunction, Lap F = -a^2 F,
    // so the solution is ((1 - e^{-a^2 t}) / a^2) F exactly.
    double a = 2.0 * M_PI / (2.0 * L) * 3.0;
    double t = 0.4;
    VectorGrid out = prop.duhamel(
        [a](const Vec3& x, double) {
            return Vec3{std::sin(a * x.y), 0.0, 0.0};
        },
        t, 10, 6);
    double expected = (1.0 - std::exp(-a * a * t)) / (a * a);
    // probes on grid nodes: at() is exact there (no interpolation error)
    for (const Vec3& x : {Vec3{0.0, 1.0, 0.0}, Vec3{2.0, -0.5, 1.5}}) {
        Vec3 v = out.at(x);
        CHECK(v.x ==
              doctest::Approx(expected * std::sin(a * x.y)).epsilon(1e-6));
        CHECK(std::abs(v.y) < 1e-10);
        CHECK(std::abs(v.z) < 1e-10);
    }
}

TEST_CASE("propagator output is divergence-free") {
    StokesPropagator prop(8.0, 64);
    VectorGrid out = prop.duhamel(
        [](const Vec3& x, double) {
            return Vec3{std::exp(-0.5 * x.norm2()), 0.0, 0.0};
        },
        0.5, 8, 4);
    // 4th-order divergence through grid nodes (at() is exact on nodes, and
    // the trigonometric interpolant of the output is exactly solenoidal)
    double h = out.dx;
    double worst = 0.0, scale = 0.0;
    for (const Vec3& x :
         {Vec3{0.5, 0.0, -1.0}, Vec3{1.5, 1.0, 0.5}, Vec3{-2.0, 0.5, 1.0}}) {
        double div = 0.0;
        for (int i = 0; i < 3; ++i) {
            Vec3 xp = x, xm = x, xpp = x, xmm = x;
            xp[i] += h;
            xm[i] -= h;
            xpp[i] += 2.0 * h;
            xmm[i] -= 2.0 * h;
            div += (-out.at(xpp)[i] + 8.0 * out.at(xp)[i] -
                    8.0 * out.at(xm)[i] + out.at(xmm)[i]) /
                   (12.0 * h);
        }
        worst = std::max(worst, std::abs(div));
        scale = std::max(scale, out.at(x).norm());
    }
    CHECK(worst < 1e-3 * std::max(scale, 1e-12));
}

TEST_CASE("two-path equivalence: Duhamel flow matches the singular-integral"
          " construction") {
    // The linear flow driven by the log-damped source equals the velocity
    // assembled from the Newtonian potential; two independent pipelines.
    double t = 0.75, delta = 0.01;
    const auto& prof = evaluator_b().forcing();
    StokesPropagator prop(16.0, 128);
    VectorGrid z = prop.duhamel(
        [&](const Vec3& x, double s) {
            return heat::forcing_eval(prof, {x, s}) * (-delta);
        },
        t, 14, 6);
    const potential::VelocityField& vb = base_velocity_b();
    double ref_scale = 0.0;
    // probes are grid nodes (multiples of dx = 0.25), so the grid lookup is
    // exact and the comparison isolates the two computation paths
    std::vector<Vec3> probes;
    for (double r : {0.5, 1.0, 1.5, 2.0, 2.5}) {
        probes.push_back({r, 0.0, 0.0});
        probes.push_back({0.0, r, 0.0});
        probes.push_back({-r / 2, r / 2, r});
        probes.push_back({r, -r, r / 2});
    }
    REQUIRE(probes.size() == 20);
    for (const Vec3& x : probes)
        ref_scale = std::max(ref_scale, (vb.velocity(x, t) * delta).norm());
    for (const Vec3& x : probes) {
        Vec3 a = z.at(x);
        Vec3 b = vb.velocity(x, t) * delta;
        CHECK((a - b).norm() < 1e-3 * ref_scale);
    }
}

TEST_CASE("first Picard iterate scales quadratically in the amplitude") {
    PicardOptions opt;
    opt.n = 32;
    opt.k_max = 6;
    PicardSolver s1(base_velocity_b(), 0.01, opt);
    PicardSolver s2(base_velocity_b(), 0.02, opt);
    double n1 = s1.x_norm(s1.map({}));
    double n2 = s2.x_norm(s2.map({}));
    CHECK(n1 > 0.0);
    CHECK(n2 / n1 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("zero amplitude contracts immediately") {
    PicardOptions opt;
    opt.n = 32;
    opt.k_max = 6;
    PicardSolver solver(base_velocity_b(), 0.0, opt);
    PicardTrace trace = solver.solve();
    CHECK(trace.state.converged);
    CHECK(trace.state.iterations == 1);
    CHECK(trace.state.x_norm == 0.0);
}

TEST_CASE("Picard iteration at small amplitude: containment and contraction") {
    PicardOptions opt;
    opt.n = 48;
    opt.k_max = 8;
    PicardSolver solver(base_velocity_b(), 0.01, opt);
    PicardTrace trace = solver.solve();
    CHECK(trace.state.converged);
    CHECK(trace.state.iterations <= 12);
    CHECK(trace.state.contained);
    CHECK(trace.state.contracting);
    CHECK(trace.state.contraction_ratio < 0.5);
    CHECK(trace.state.x_norm <= trace.state.eta);
    CHECK(trace.state.residual < 2.0 * solver.options().tol);

    // the assembled solution: bounded perturbation on top of unbounded flow
    BlowupSolution v(solver);
    const auto& mesh = solver.mesh();
    double z6 = v.z_part({0, 0, 0}, mesh[12]).norm();   // t = 1 - 2^-6
    double z8 = v.z_part({0, 0, 0}, mesh[16]).norm();   // t = 1 - 2^-8
    CHECK(z8 > z6);
    CHECK(v({0.3, 0.2, 0.1}, 0.0).norm() == 0.0);
    // interior residual of the perturbed momentum balance
    double res = solver.nse_residual(solver.fixed_point(), {0.75, 0.9}, 3.0);
    CHECK(res < 1e-2);
}

TEST_CASE("amplitude threshold search returns a monotone pass set") {
    PicardOptions opt;
    opt.n = 32;
    opt.k_max = 6;
    opt.m_max = 8;
    DeltaSearchResult res =
        delta0_search(base_velocity_b(), {0.04, 0.02, 0.01, 0.005}, opt);
    CHECK(res.delta_hat > 0.0);
    // monotone: no failure below the largest passing amplitude
    bool below = false;
    for (const auto& [d, pass] : res.trials) {
        if (d <= res.delta_hat) CHECK(pass);
        if (d < res.delta_hat) below = true;
    }
    CHECK(below);
}
