#include <cmath>

#include "nsblow/audit/audit.hpp"

namespace nsblow::audit {

namespace {
// Stream function X = E(q) e_3 with q = |x|^2 and E = e^{-1/(1-q)} inside the
// unit ball. A = E', so Phi = curl X = 2A (x2, -x1, 0).
struct Radial {
    double a = 0.0, a1 = 0.0, a2 = 0.0;  // A, A', A'' as functions of q
};

Radial radial(double q) {
    Radial r;
    if (q >= 1.0) return r;
    double u = 1.0 / (1.0 - q);
    double e = std::exp(-u);
    r.a = -e * u * u;
    r.a1 = e * u * u * u * (u - 2.0);
    r.a2 = e * u * u * u * u * (-u * u + 6.0 * u - 6.0);
    return r;
}

Vec3 profile_phi(const Vec3& y) {
    Radial r = radial(y.norm2());
    return {2.0 * r.a * y.y, -2.0 * r.a * y.x, 0.0};
}

// G = lambda^2 F evaluated in the self-similar variable y = x / lambda
Vec3 scaled_force(const Vec3& y, double big_l, double lambda) {
    double q = y.norm2();
    Radial r = radial(q);
    if (r.a == 0.0 && q >= 1.0) return {};
    Vec3 rot{y.y, -y.x, 0.0};
    double lap_coeff = 8.0 * r.a2 * q + 20.0 * r.a1;
    double dilate_coeff = 4.0 * r.a1 * q + 2.0 * r.a;
    Vec3 out = rot * (big_l * lap_coeff - 2.0 * r.a -
                      0.5 * big_l * dilate_coeff);
    // -(v.grad)v contributes +4 A^2 L^2 lambda (y1, y2, 0) after scaling
    out.x += 4.0 * r.a * r.a * big_l * big_l * lambda * y.x;
    out.y += 4.0 * r.a * r.a * big_l * big_l * lambda * y.y;
    return out;
}
}  // namespace

Vec3 baseline_velocity(const Vec3& x, double t) {
    double lambda = std::sqrt(1.0 - t);
    double big_l = std::log(1.0 / (1.0 - t));
    return profile_phi(x * (1.0 / lambda)) * big_l;
}

Vec3 baseline_force(const Vec3& x, double t) {
    double lambda = std::sqrt(1.0 - t);
    double big_l = std::log(1.0 / (1.0 - t));
    return scaled_force(x * (1.0 / lambda), big_l, lambda) *
           (1.0 / (lambda * lambda));
}

BaselineReport baseline_supercritical(const TimeLadder& ladder,
                                      const SampleGrid& unit_grid) {
    BaselineReport rep;
    for (double t : ladder.levels) {
        double lambda = std::sqrt(1.0 - t);
        double big_l = std::log(1.0 / (1.0 - t));
        ScalarField mag32 = [&](const Vec3& y) {
            return scaled_force(y, big_l, lambda).norm();
        };
        // ||F(., t)||_p = lambda^{3/p - 2} ||G_t||_p by exact rescaling
        double n32 = lp_norm(mag32, 1.5, unit_grid, 10.0).value;
        double n14 =
            lp_norm(mag32, 1.4, unit_grid, 10.0).value *
            std::pow(lambda, 3.0 / 1.4 - 2.0);
        rep.t.push_back(t);
        rep.norm_32.push_back(n32);
        rep.ratio_log.push_back(big_l > 0.0 ? n32 / big_l : 0.0);
        rep.norm_14.push_back(n14);
    }
    // divergence of the closed-form velocity by centered differences
    double h = 1e-5, t0 = 0.5;
    for (const Vec3& x : {Vec3{0.2, 0.1, -0.3}, Vec3{0.4, -0.2, 0.1},
                          Vec3{0.05, 0.45, 0.2}}) {
        double div = 0.0;
        for (int i = 0; i < 3; ++i) {
            Vec3 xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            div += (baseline_velocity(xp, t0)[i] -
                    baseline_velocity(xm, t0)[i]) /
                   (2.0 * h);
        }
        rep.div_defect = std::max(rep.div_defect, std::abs(div));
    }
    return rep;
}

}  // namespace nsblow::audit
