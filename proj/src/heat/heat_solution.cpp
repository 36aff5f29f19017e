#include "nsblow/heat/heat_solution.hpp"

#include <algorithm>
#include <cmath>

namespace nsblow::heat {

namespace {

constexpr double kPref = 0.28209479177387814;  // (4 pi)^{-1/2}
constexpr double kSmallX = 2e-3;               // below this, use origin moments

// Inner radial integral of the Duhamel formula at heat time s, evaluated
// together with the combinations feeding U, U' and U''.  All kernel
// differences use expm1 so nothing cancels catastrophically.
struct Inner {
    double w = 0.0;   // int y rho (E- - E+) dy
    double v = 0.0;   // int (y rho)' (E- + E+) dy
    double vx = 0.0;  // int (y rho)'' (E- - E+) dy
};

std::vector<double> radial_breaks(double x, double s, double c, bool has_log,
                                  double r_max) {
    std::vector<double> b{0.0, 1.0, 2.0, 4.0, r_max};
    double w = 2.0 * std::sqrt(s);
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
        b.push_back(x + k * w);
        b.push_back(x - k * w);
    }
    double sc = std::sqrt(c);
    for (double d : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) b.push_back(d * sc);
    if (has_log && c < 1.0) b.push_back(std::sqrt(1.0 - c));
    return make_breaks(b, 0.0, r_max);
}

Inner inner_integral(double x, double s, double c, bool has_log, int gl_order,
                     double r_max) {
    double kappa = 0.25 / s;
    const auto& gl = GaussLegendre::get(gl_order);
    Inner acc;
    auto breaks = radial_breaks(x, s, c, has_log, r_max);
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
        double a = breaks[p], bb = breaks[p + 1];
        double half = 0.5 * (bb - a), mid = 0.5 * (bb + a);
        for (int i = 0; i < gl_order; ++i) {
            double y = mid + half * gl.nodes[i];
            double wq = half * gl.weights[i];
            double da = kappa * (x - y) * (x - y);
            if (da > 700.0) continue;
            double ea = std::exp(-da);
            double em = std::expm1(-4.0 * kappa * x * y);  // = e^{-b+a} - 1
            double diff = -ea * em;                        // E- - E+
            double sum = ea * (2.0 + em);                  // E- + E+
            RadialDensity d = density_radial(y, c, has_log);
            acc.w += wq * y * d.v * diff;
            acc.v += wq * (d.v + y * d.dr) * sum;
            acc.vx += wq * (2.0 * d.dr + y * d.d2r) * diff;
        }
    }
    return acc;
}

// Gaussian moments A2 = int y^2 rho e^{-kappa y^2}, A4 likewise with y^4,
// feeding the exact origin formulas.
struct Moments {
    double a2 = 0.0, comb = 0.0;  // comb = -8 k^2 A2 + (16/3) k^3 A4, fused
};

Moments origin_moments(double s, double c, bool has_log, int gl_order,
                       double r_max) {
    double kappa = 0.25 / s;
    const auto& gl = GaussLegendre::get(gl_order);
    Moments m;
    auto breaks = radial_breaks(0.0, s, c, has_log, r_max);
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
        double a = breaks[p], bb = breaks[p + 1];
        double half = 0.5 * (bb - a), mid = 0.5 * (bb + a);
        for (int i = 0; i < gl_order; ++i) {
            double y = mid + half * gl.nodes[i];
            double wq = half * gl.weights[i];
            double e = kappa * y * y;
            if (e > 700.0) continue;
            double g = std::exp(-e) * density_radial(y, c, has_log).v;
            double y2 = y * y;
            m.a2 += wq * y2 * g;
            // fused polynomial keeps the near-cancellation inside one integral
            m.comb += wq * 8.0 * kappa * kappa * y2 * ((2.0 / 3.0) * kappa * y2 - 1.0) * g;
        }
    }
    return m;
}

struct TimeMesh {
    std::vector<double> breaks;  // in u = sqrt(s)
};

TimeMesh time_mesh(double t, double c, bool has_log) {
    double umax = std::sqrt(t);
    int levels = std::clamp(
        static_cast<int>(std::ceil(0.5 * std::log2(t / c))) + 10, 14, 40);
    std::vector<double> pts{0.0, umax};
    for (int j = levels; j >= 0; --j) pts.push_back(umax * std::ldexp(1.0, -j));
    // The log density's second derivative jumps across q + c + s = 1. The
    // kink curve leaves the radial domain at s* = 1 - c, which puts a 3/2
    // power singularity into the time integrand; grade panels into it.
    double sk = 1.0 - c;
    if (has_log && sk > 0.0 && sk <= t) {
        double uk = std::sqrt(sk);
        for (int mgrade = 1; mgrade <= 18; ++mgrade) {
            double step = std::ldexp(1.0, -mgrade);
            pts.push_back(uk * (1.0 - step));
            if (uk < umax) pts.push_back(uk + (umax - uk) * step);
        }
        pts.push_back(uk);
    }
    TimeMesh m;
    m.breaks = make_breaks(pts, 0.0, umax);
    return m;
}

}  // namespace

RadialDerivs duhamel_radial(const ForcingProfile& profile, double rho, double t,
                            const HeatQuad& quad) {
    if (!(rho >= 0.0)) throw std::invalid_argument("duhamel_radial: rho < 0");
    if (!(t >= 0.0 && t < profile.T))
        throw std::invalid_argument("duhamel_radial: requires 0 <= t < T");
    RadialDerivs out;
    if (t == 0.0) return out;

    double c = profile.T - t;
    bool lg = profile.has_log();
    int glt = quad.gl_time + 4 * quad.extra_levels;
    int gls = quad.gl_space + 4 * quad.extra_levels;
    const auto& gl = GaussLegendre::get(glt);
    TimeMesh mesh = time_mesh(t, c, lg);

    bool small = rho < kSmallX;
    double u0 = 0.0, d20 = 0.0;  // origin value and second derivative
    for (size_t p = 0; p + 1 < mesh.breaks.size(); ++p) {
        double a = mesh.breaks[p], b = mesh.breaks[p + 1];
        double half = 0.5 * (b - a), mid = 0.5 * (b + a);
        for (int i = 0; i < glt; ++i) {
            double u = mid + half * gl.nodes[i];
            double wq = half * gl.weights[i];
            double s = u * u;
            double cs = c + s;
            if (small) {
                Moments m = origin_moments(s, cs, lg, gls, quad.r_max);
                double kappa = 0.25 / s;
                u0 += wq * 4.0 * kappa * m.a2;
                d20 += wq * m.comb;
            } else {
                Inner in = inner_integral(rho, s, cs, lg, gls, quad.r_max);
                out.u += wq * in.w / rho;
                out.du += wq * (in.v - in.w / rho) / rho;
                out.d2u += wq * (2.0 * (in.w / rho - in.v) / rho + in.vx) / rho;
            }
        }
    }
    double scale = 2.0 * kPref * profile.scale();
    if (small) {
        u0 *= scale;
        d20 *= scale;
        out.u = u0 + 0.5 * d20 * rho * rho;
        out.du = d20 * rho;
        out.d2u = d20;
    } else {
        out.u *= scale;
        out.du *= scale;
        out.d2u *= scale;
    }
    return out;
}

RadialProfile::RadialProfile(const ForcingProfile& profile, double t,
                             const HeatQuad& quad, double rho_max, double dzeta) {
    if (!(t >= 0.0 && t < profile.T))
        throw std::invalid_argument("RadialProfile: requires 0 <= t < T");
    t_ = t;
    c_ = profile.T - t;
    rho_max_ = rho_max;
    if (t == 0.0) return;  // zero profile

    zeta0_ = std::log(c_);
    double zeta1 = std::log(rho_max * rho_max + c_);
    nodes_ = static_cast<int>(std::ceil((zeta1 - zeta0_) / dzeta)) + 1;
    if (nodes_ < 8) nodes_ = 8;
    dz_ = (zeta1 - zeta0_) / (nodes_ - 1);

    std::vector<double> yu(nodes_), y1(nodes_), y2(nodes_);
    parallel_for(nodes_, [&](std::size_t i) {
        double zeta = zeta0_ + dz_ * static_cast<double>(i);
        double rho = i == 0 ? 0.0 : std::sqrt(std::max(0.0, std::exp(zeta) - c_));
        RadialDerivs d = duhamel_radial(profile, rho, t, quad);
        double w = rho * rho + c_;
        yu[i] = d.u;
        y1[i] = (rho < kSmallX ? d.d2u : d.du / rho) * w;
        y2[i] = d.d2u * w;
    });
    su_ = UniformSpline(zeta0_, dz_, yu);
    sp1_ = UniformSpline(zeta0_, dz_, y1);
    sp2_ = UniformSpline(zeta0_, dz_, y2);
}

RadialDerivs RadialProfile::all(double rho) const {
    if (!(rho >= 0.0)) throw std::invalid_argument("RadialProfile: rho < 0");
    RadialDerivs out;
    if (nodes_ == 0 || rho >= rho_max_) return out;
    double w = rho * rho + c_;
    double zeta = std::log(w);
    out.u = su_(zeta);
    double g1 = sp1_(zeta) / w;
    out.du = rho * g1;
    out.d2u = sp2_(zeta) / w;
    return out;
}

double RadialProfile::value(double rho) const { return all(rho).u; }
double RadialProfile::deriv(double rho) const { return all(rho).du; }
double RadialProfile::second(double rho) const { return all(rho).d2u; }

HeatSolutionEvaluator::HeatSolutionEvaluator(const ForcingProfile& profile,
                                             double tol, HeatQuad quad)
    : profile_(profile), tol_(tol), quad_(quad) {
    if (!(tol > 0.0)) throw std::invalid_argument("HeatSolutionEvaluator: tol <= 0");
}

RadialDerivs HeatSolutionEvaluator::radial(double rho, double t) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find({rho, t});
        if (it != memo_.end()) return it->second;
    }
    RadialDerivs coarse = duhamel_radial(profile_, rho, t, quad_);
    HeatQuad fine = quad_;
    fine.extra_levels = quad_.extra_levels + 1;
    RadialDerivs ref = duhamel_radial(profile_, rho, t, fine);
    // derivative quadratures converge more slowly; scale their budgets
    double floor_u = std::max(1.0, std::abs(ref.u));
    double floor_1 = 10.0 * std::max(1.0, std::abs(ref.du));
    double floor_2 = 100.0 * std::max(1.0, std::abs(ref.d2u));
    if (std::abs(ref.u - coarse.u) > tol_ * floor_u ||
        std::abs(ref.du - coarse.du) > tol_ * floor_1 ||
        std::abs(ref.d2u - coarse.d2u) > tol_ * floor_2) {
        double err = std::max({std::abs(ref.u - coarse.u) / floor_u,
                               std::abs(ref.du - coarse.du) / floor_1,
                               std::abs(ref.d2u - coarse.d2u) / floor_2});
        throw AccuracyError("heat solution quadrature did not converge", err);
    }
    {
        std::lock_guard<std::mutex> lk(mu_);
        memo_.emplace(std::make_pair(rho, t), ref);
    }
    return ref;
}

double HeatSolutionEvaluator::h1(const Vec3& x, double t) const {
    return radial(x.norm(), t).u;
}

Vec3 HeatSolutionEvaluator::grad_h1(const Vec3& x, double t) const {
    double rho = x.norm();
    RadialDerivs d = radial(rho, t);
    if (rho < 1e-12) return Vec3{0.0, 0.0, 0.0};
    return x * (d.du / rho);
}

Mat3 HeatSolutionEvaluator::hess_h1(const Vec3& x, double t) const {
    double rho = x.norm();
    RadialDerivs d = radial(rho, t);
    double g1 = rho < kSmallX ? d.d2u : d.du / rho;
    Mat3 h;
    for (int i = 0; i < 3; ++i) h(i, i) = g1;
    if (rho >= kSmallX) {
        Vec3 n = x * (1.0 / rho);
        double diff = d.d2u - g1;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) h(i, j) += diff * n[i] * n[j];
    }
    return h;
}

const RadialProfile& HeatSolutionEvaluator::profile(double t) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = profiles_.find(t);
        if (it != profiles_.end()) return *it->second;
    }
    auto built = std::make_shared<RadialProfile>(profile_, t, quad_);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, inserted] = profiles_.emplace(t, std::move(built));
    return *it->second;
}

ResidualReport heat_residual(const HeatSolutionEvaluator& ev,
                             const std::vector<SpaceTimePoint>& samples,
                             double h_space, double h_time) {
    if (samples.empty())
        throw std::invalid_argument("heat_residual: empty sample set");
    ResidualReport rep;
    std::mutex mu;
    parallel_for(samples.size(), [&](std::size_t idx) {
        const SpaceTimePoint& p = samples[idx];
        auto f = [&](const Vec3& x, double t) { return ev.h1(x, t); };
        double lap = fd_laplacian(f, p.x, p.t, h_space);
        double dt = fd_time(f, p.x, p.t, h_time, ev.T());
        double c = ev.T() - p.t;
        double src = ev.forcing().scale() *
                     density(p.x.norm2(), c, ev.forcing().has_log()).v;
        double rel = std::abs(lap - dt + src) / (std::abs(src) + 1e-300);
        std::lock_guard<std::mutex> lk(mu);
        if (rel > rep.max_relative) {
            rep.max_relative = rel;
            rep.worst = p;
        }
    });
    return rep;
}

}  // namespace nsblow::heat
