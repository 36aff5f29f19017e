#include "nsblow/potential/radial_potential.hpp"

#include <algorithm>
#include <cmath>

namespace nsblow::potential {

namespace {
constexpr double kDz = 1.0 / 48.0;

double cum_panel(const heat::RadialProfile& prof, double a, double b,
                 int weight_pow) {
    // int_a^b U(r) r^weight_pow dr on one spline interval
    const auto& gl = GaussLegendre::get(8);
    double half = 0.5 * (b - a), mid = 0.5 * (b + a), acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double r = mid + half * gl.nodes[i];
        acc += half * gl.weights[i] * prof.value(r) * std::pow(r, weight_pow);
    }
    return acc;
}
}  // namespace

RadialPotential::RadialPotential(const heat::HeatSolutionEvaluator& ev, double t) {
    const heat::RadialProfile& prof = ev.profile(t);
    t_ = t;
    c_ = ev.T() - t;
    rho_max_ = prof.rho_max();
    if (prof.empty()) return;  // t = 0: everything stays zero

    zeta0_ = std::log(c_);
    double zeta1 = std::log(rho_max_ * rho_max_ + c_);
    nodes_ = static_cast<int>(std::ceil((zeta1 - zeta0_) / kDz)) + 1;
    if (nodes_ < 8) nodes_ = 8;
    dz_ = (zeta1 - zeta0_) / (nodes_ - 1);

    std::vector<double> rho(nodes_);
    for (int i = 0; i < nodes_; ++i) {
        double zeta = zeta0_ + dz_ * i;
        rho[i] = i == 0 ? 0.0 : std::sqrt(std::max(0.0, std::exp(zeta) - c_));
    }

    std::vector<double> bigm(nodes_, 0.0), bign(nodes_, 0.0);
    for (int i = 1; i < nodes_; ++i)
        bigm[i] = bigm[i - 1] + cum_panel(prof, rho[i - 1], rho[i], 2);
    for (int i = nodes_ - 2; i >= 0; --i)
        bign[i] = bign[i + 1] + cum_panel(prof, rho[i], rho[i + 1], 1);
    m_inf_ = bigm[nodes_ - 1];

    std::vector<double> ym(nodes_), yaa(nodes_), yu(nodes_), yp1(nodes_);
    for (int i = 0; i < nodes_; ++i) {
        heat::RadialDerivs d = prof.all(rho[i]);
        yu[i] = d.u;
        double w = rho[i] * rho[i] + c_;
        yp1[i] = (i == 0 ? d.d2u : d.du / rho[i]) * w;
        if (i == 0) {
            ym[i] = d.u / 3.0;
            yaa[i] = -d.d2u / 5.0;
        } else {
            double r3 = rho[i] * rho[i] * rho[i];
            ym[i] = bigm[i] / r3;
            yaa[i] = (3.0 * ym[i] - d.u) / (rho[i] * rho[i]);
        }
    }
    sm_ = UniformSpline(zeta0_, dz_, ym);
    saa_ = UniformSpline(zeta0_, dz_, yaa);
    sn_ = UniformSpline(zeta0_, dz_, bign);
    su_ = UniformSpline(zeta0_, dz_, yu);
    sp1_ = UniformSpline(zeta0_, dz_, yp1);
}

RadialPotentialData RadialPotential::data(double rho) const {
    if (!(rho >= 0.0)) throw std::invalid_argument("RadialPotential: rho < 0");
    RadialPotentialData out;
    if (nodes_ == 0) return out;
    if (rho >= rho_max_) {
        // far field: pure monopole, U negligible by construction
        double r2 = rho * rho, r3 = r2 * rho;
        out.m = m_inf_ / r3;
        out.big_a = 3.0 * out.m;
        out.phi = m_inf_ / rho;
        out.d1 = out.big_a / rho;
        out.d2 = -5.0 * out.d1;
        return out;
    }
    double w = rho * rho + c_;
    double zeta = std::log(w);
    out.u = su_(zeta);
    double g1 = sp1_(zeta) / w;  // U'/rho
    out.du = rho * g1;
    out.m = sm_(zeta);
    double aa = saa_(zeta);  // A / rho^2
    out.big_a = aa * rho * rho;
    out.phi = out.m * rho * rho + sn_(zeta);
    out.d1 = aa * rho;
    out.d2 = -5.0 * out.d1 - out.du;
    return out;
}

const RadialPotential& PotentialCache::at(double t) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return *it->second;
    }
    auto built = std::make_shared<RadialPotential>(ev_, t);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, inserted] = cache_.emplace(t, std::move(built));
    return *it->second;
}

namespace {
double source_moment(const heat::ForcingProfile& profile, double a, double b,
                     double c, int weight_pow) {
    bool lg = profile.has_log();
    double scale = profile.scale();
    std::vector<double> pts{a, b};
    double sc = std::sqrt(c);
    for (double d : {0.25, 0.5, 1.0, 2.0, 4.0}) pts.push_back(d * sc);
    if (lg && c < 1.0) pts.push_back(std::sqrt(1.0 - c));
    auto breaks = make_breaks(pts, a, b);
    auto f = [&](double r) {
        return scale * heat::density(r * r, c, lg).v * std::pow(r, weight_pow);
    };
    return gl_panels(f, breaks, 14);
}
}  // namespace

PressureRadial pressure_radial(const heat::ForcingProfile& profile, double rho,
                               double t) {
    if (!(t >= 0.0 && t < profile.T))
        throw std::invalid_argument("pressure_radial: requires 0 <= t < T");
    if (!(rho >= 0.0)) throw std::invalid_argument("pressure_radial: rho < 0");
    double c = profile.T - t;
    PressureRadial out;
    out.g = profile.scale() * heat::density(rho * rho, c, profile.has_log()).v;
    if (rho < 1e-8) {
        out.psi = heat::density(0.0, c, profile.has_log()).v * profile.scale() *
                  rho / 3.0;
        out.dpsi = heat::density(0.0, c, profile.has_log()).v * profile.scale() / 3.0;
        return out;
    }
    double mg = source_moment(profile, 0.0, rho, c, 2);
    out.psi = mg / (rho * rho);
    out.dpsi = out.g - 2.0 * out.psi / rho;
    return out;
}

double newton_potential_source(const heat::ForcingProfile& profile, double rho,
                               double t) {
    double c = profile.T - t;
    double mg = rho > 0.0 ? source_moment(profile, 0.0, rho, c, 2) : 0.0;
    double ng = source_moment(profile, rho, 10.0, c, 1);
    return -(rho > 0.0 ? mg / rho : 0.0) - ng;  // (-Delta)^{-1} f1, f1 = -g
}

double newton_potential(const RadialPotential& pot, double rho) {
    return pot.data(rho).phi;
}

}  // namespace nsblow::potential
