#include "nsblow/potential/velocity.hpp"

#include <cmath>

#include "nsblow/fields/fd.hpp"
#include "nsblow/potential/riesz.hpp"

namespace nsblow::potential {

Vec3 CutoffSpec::grad_phi(const Vec3& x, double t) const {
    double rho = x.norm();
    if (rho <= 1.0 || rho >= 2.0) return {};
    return x * (chi(t) * psi_d1(rho) / rho);
}

double CutoffSpec::lap_phi(const Vec3& x, double t) const {
    double rho = x.norm();
    if (rho <= 1.0 || rho >= 2.0) return 0.0;
    return chi(t) * (psi_d2(rho) + 2.0 * psi_d1(rho) / rho);
}

Vec3 CutoffSpec::grad_lap_phi(const Vec3& x, double t) const {
    double rho = x.norm();
    if (rho <= 1.0 || rho >= 2.0) return {};
    double s = psi_d3(rho) + 2.0 * psi_d2(rho) / rho -
               2.0 * psi_d1(rho) / (rho * rho);
    return x * (chi(t) * s / rho);
}

Mat3 CutoffSpec::hess_phi(const Vec3& x, double t) const {
    Mat3 h;
    double rho = x.norm();
    if (rho <= 1.0 || rho >= 2.0) return h;
    double ct = chi(t);
    double g1 = ct * psi_d1(rho) / rho;
    double diff = ct * psi_d2(rho) - g1;
    Vec3 n = x * (1.0 / rho);
    for (int i = 0; i < 3; ++i) {
        h(i, i) = g1;
        for (int j = 0; j < 3; ++j) h(i, j) += diff * n[i] * n[j];
    }
    return h;
}

namespace {
// third-derivative tensor coefficient form: see RadialPotentialData docs
inline double third(const RadialPotentialData& d, const Vec3& n, int a, int b,
                    int k) {
    double v = d.d2 * n[a] * n[b] * n[k];
    if (a == b) v += d.d1 * n[k];
    if (a == k) v += d.d1 * n[b];
    if (b == k) v += d.d1 * n[a];
    return v;
}

inline double hess_phi_entry(const RadialPotentialData& d, const Vec3& n, int i,
                             int j) {
    double v = d.big_a * n[i] * n[j];
    if (i == j) v += -d.m;
    return v;
}
}  // namespace

VelocityField::VelocityField(const heat::HeatSolutionEvaluator& ev,
                             RieszMethod method, std::optional<CutoffSpec> cutoff)
    : ev_(ev), method_(method), cutoff_(std::move(cutoff)), cache_(ev) {
    if (cutoff_ && cutoff_->T != ev.T())
        throw std::invalid_argument("VelocityField: cutoff T mismatch");
}

VelocityField::~VelocityField() = default;

const CutoffSpec& VelocityField::cutoff() const {
    if (!cutoff_) throw std::invalid_argument("VelocityField: no cutoff configured");
    return *cutoff_;
}

namespace {
template <typename Map, typename Make>
auto& cached(std::mutex& mu, Map& map, double t, Make make) {
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = map.find(t);
        if (it != map.end()) return *it->second;
    }
    auto built = make();
    std::lock_guard<std::mutex> lk(mu);
    auto [it, ins] = map.emplace(t, std::move(built));
    return *it->second;
}
}  // namespace

Vec3 VelocityField::base_velocity(const Vec3& x, double t) const {
    if (t == 0.0) return {};
    if (method_ == RieszMethod::Radial) {
        const RadialPotential& pot = cache_.at(t);
        double rho = x.norm();
        RadialPotentialData d = pot.data(rho);
        double pp = -d.m;
        if (rho < 1e-12) return {-2.0 * pp, 0.0, 0.0};
        Vec3 n = x * (1.0 / rho);
        return {-(d.big_a * (n.y * n.y + n.z * n.z) + 2.0 * pp),
                d.big_a * n.x * n.y, d.big_a * n.x * n.z};
    }
    if (method_ == RieszMethod::PV) {
        const PVRiesz& pv = cached(mu_, pv_, t, [&] {
            return std::make_shared<PVRiesz>(ev_, t);
        });
        return {-(pv.second(1, 1, x) + pv.second(2, 2, x)), pv.second(1, 0, x),
                pv.second(2, 0, x)};
    }
    const FourierRiesz& fr = cached(mu_, fourier_, t, [&] {
        return std::make_shared<FourierRiesz>(ev_, t);
    });
    return {-(fr.second(1, 1, x) + fr.second(2, 2, x)), fr.second(1, 0, x),
            fr.second(2, 0, x)};
}

Mat3 VelocityField::base_gradient(const Vec3& x, double t) const {
    Mat3 g;
    if (t == 0.0) return g;
    if (method_ == RieszMethod::Radial) {
        const RadialPotential& pot = cache_.at(t);
        double rho = x.norm();
        if (rho < 1e-12) return g;
        RadialPotentialData d = pot.data(rho);
        Vec3 n = x * (1.0 / rho);
        for (int j = 0; j < 3; ++j) {
            g(0, j) = -(third(d, n, 1, 1, j) + third(d, n, 2, 2, j));
            g(1, j) = third(d, n, 0, 1, j);
            g(2, j) = third(d, n, 0, 2, j);
        }
        return g;
    }
    auto entry = [&](auto&& engine) {
        for (int j = 0; j < 3; ++j) {
            g(0, j) = -(engine.second_of_grad(1, 1, j, x) +
                        engine.second_of_grad(2, 2, j, x));
            g(1, j) = engine.second_of_grad(1, 0, j, x);
            g(2, j) = engine.second_of_grad(2, 0, j, x);
        }
    };
    if (method_ == RieszMethod::PV) {
        entry(cached(mu_, pv_, t, [&] { return std::make_shared<PVRiesz>(ev_, t); }));
    } else {
        entry(cached(mu_, fourier_, t,
                     [&] { return std::make_shared<FourierRiesz>(ev_, t); }));
    }
    return g;
}

Vec3 VelocityField::curl_potential(const Vec3& x, double t) const {
    if (t == 0.0) return {};
    const RadialPotential& pot = cache_.at(t);
    double m = pot.data(x.norm()).m;
    return {0.0, -m * x.z, m * x.y};  // (0, d3 Phi, -d2 Phi), Phi'/rho = -m
}

Vec3 VelocityField::velocity(const Vec3& x, double t) const {
    if (!(t >= 0.0 && t < ev_.T()))
        throw std::invalid_argument("velocity: requires 0 <= t < T");
    Vec3 vb = base_velocity(x, t);
    if (!cutoff_) return vb;
    double ph = cutoff_->phi(x, t);
    Vec3 out = vb * ph;
    Vec3 gp = cutoff_->grad_phi(x, t);
    out += gp.cross(curl_potential(x, t));
    return out;
}

Mat3 VelocityField::gradient(const Vec3& x, double t) const {
    if (!(t >= 0.0 && t < ev_.T()))
        throw std::invalid_argument("gradient: requires 0 <= t < T");
    Mat3 gb = base_gradient(x, t);
    if (!cutoff_) return gb;
    Mat3 out;
    double ph = cutoff_->phi(x, t);
    Vec3 vb = base_velocity(x, t);
    Vec3 gp = cutoff_->grad_phi(x, t);
    Mat3 hp = cutoff_->hess_phi(x, t);
    Vec3 C = curl_potential(x, t);

    const RadialPotential& pot = cache_.at(t);
    double rho = x.norm();
    RadialPotentialData d = pot.data(rho);
    Vec3 n = rho > 1e-12 ? x * (1.0 / rho) : Vec3{};
    for (int j = 0; j < 3; ++j) {
        // column j of the Hessian of phi, and of dC/dx_j
        Vec3 hpj{hp(0, j), hp(1, j), hp(2, j)};
        Vec3 dCj{0.0, hess_phi_entry(d, n, 2, j), -hess_phi_entry(d, n, 1, j)};
        Vec3 col = vb * gp[j];
        for (int i = 0; i < 3; ++i) col[i] += ph * gb(i, j);
        Vec3 cross = hpj.cross(C) + gp.cross(dCj);
        for (int i = 0; i < 3; ++i) out(i, j) = col[i] + cross[i];
    }
    return out;
}

double pressure_eval(const heat::ForcingProfile& profile, const Vec3& x, double t) {
    double rho = x.norm();
    PressureRadial pr = pressure_radial(profile, rho, t);
    if (rho < 1e-8) return pr.g * x.x / 3.0;
    return pr.psi * x.x / rho;
}

Vec3 pressure_grad(const heat::ForcingProfile& profile, const Vec3& x, double t) {
    double rho = x.norm();
    PressureRadial pr = pressure_radial(profile, rho, t);
    if (rho < 1e-8) return {pr.g / 3.0, 0.0, 0.0};
    Vec3 n = x * (1.0 / rho);
    Vec3 out = n * (pr.dpsi * n.x);
    out.x += pr.psi * (1.0 - n.x * n.x) / rho;
    out.y += -pr.psi * n.x * n.y / rho;
    out.z += -pr.psi * n.x * n.z / rho;
    // assembled as psi' x^1 x^j + psi (delta_1j - x^1 x^j)/rho
    return out;
}

double pressure_eval_unreduced(const VelocityField& vf, const Vec3& x, double t) {
    // (Delta - d_t)(d1 Phi): Delta d1 Phi = -d1 h1 = -U' x^1.
    const PotentialCache& cache = vf.potentials();
    double rho = x.norm();
    RadialPotentialData d = cache.at(t).data(rho);
    double lap_part = rho > 1e-12 ? -d.du * x.x / rho : 0.0;
    auto d1phi = [&](const Vec3& y, double s) {
        return -cache.at(s).data(y.norm()).m * y.x;
    };
    double ht = fd_default_time_step(vf.source().T(), t);
    double dt_part = fd_time(d1phi, x, t, ht, vf.source().T());
    return lap_part - dt_part;
}

Vec3 fb_eval(const VelocityField& vf, const Vec3& x, double t) {
    if (!vf.has_cutoff())
        throw std::invalid_argument("fb_eval: requires the cutoff configuration");
    const CutoffSpec& cs = vf.cutoff();
    const heat::ForcingProfile& prof = vf.source().forcing();
    const RadialPotential& pot = vf.potentials().at(t);
    double rho = x.norm();
    RadialPotentialData d = pot.data(rho);
    Vec3 n = rho > 1e-12 ? x * (1.0 / rho) : Vec3{};

    double ph = cs.phi(x, t);
    Vec3 gp = cs.grad_phi(x, t);
    double lap = cs.lap_phi(x, t);
    double dtp = cs.dt_phi(x, t);
    Mat3 hp = cs.hess_phi(x, t);
    Vec3 glp = cs.grad_lap_phi(x, t);
    Vec3 dtgp = rho > 1e-12 && rho > 1.0 && rho < 2.0
                    ? n * (cs.chi_d1(t) * cs.psi_d1(rho))
                    : Vec3{};

    // term 1: 2 (grad phi . grad) h,  h = (h1, 0, 0)
    Vec3 g1 = n * d.du;
    Vec3 out{2.0 * gp.dot(g1), 0.0, 0.0};
    // term 2: h (lap phi - dt phi)
    out.x += d.u * (lap - dtp);
    // term 3: (Delta - dt)[(phi - 1) G], G = grad d1 Phi
    Vec3 G = n * (d.big_a * n.x);
    G.x += -d.m;
    Vec3 conv;  // (grad phi . grad) G
    for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) acc += gp[i] * third(d, n, j, 0, i);
        conv[j] = acc;
    }
    Vec3 gradP = pressure_grad(prof, x, t);
    out += G * (lap - dtp) + conv * 2.0 + gradP * (ph - 1.0);
    // term 4: (Delta - dt)[grad phi x C], C = curl (-Delta)^{-1} h
    Vec3 C{0.0, -d.m * x.z, d.m * x.y};
    out += (glp - dtgp).cross(C);
    for (int i = 0; i < 3; ++i) {
        Vec3 hpi{hp(0, i), hp(1, i), hp(2, i)};
        Vec3 dCi{0.0, hess_phi_entry(d, n, 2, i), -hess_phi_entry(d, n, 1, i)};
        out += hpi.cross(dCi) * 2.0;
    }
    PressureRadial pr = pressure_radial(prof, rho, t);
    Vec3 heatC{0.0, pr.psi * n.z, -pr.psi * n.y};  // (Delta - dt) C
    out += gp.cross(heatC);
    return out;
}

Vec3 force_assemble(const VelocityField& vf, const Vec3& x, double t) {
    Vec3 f = heat::forcing_eval(vf.source().forcing(), {x, t});
    Vec3 v = vf.velocity(x, t);
    Mat3 g = vf.gradient(x, t);
    Vec3 conv = g.apply(v);  // (v . grad) v
    if (!vf.has_cutoff()) return f - conv;
    double ph = vf.cutoff().phi(x, t);
    return f * ph - conv + fb_eval(vf, x, t);
}

NsResidualReport ns_residual(const VelocityField& vf,
                             const std::vector<SpaceTimePoint>& samples,
                             const std::function<Vec3(const Vec3&, double)>& force,
                             bool include_nonlinear, double h_space,
                             double h_time) {
    if (samples.empty())
        throw std::invalid_argument("ns_residual: empty sample set");
    NsResidualReport rep;
    std::mutex mu;
    const heat::ForcingProfile& prof = vf.source().forcing();
    parallel_for(samples.size(), [&](std::size_t idx) {
        const SpaceTimePoint& p = samples[idx];
        Vec3 res;
        for (int i = 0; i < 3; ++i) {
            auto comp = [&](const Vec3& y, double s) {
                return vf.velocity(y, s)[i];
            };
            res[i] = fd_laplacian(comp, p.x, p.t, h_space);
            res[i] -= fd_time(comp, p.x, p.t,
                              std::min(h_time, (vf.source().T() - p.t) / 8.0),
                              vf.source().T());
        }
        if (include_nonlinear) {
            Vec3 v = vf.velocity(p.x, p.t);
            res = res - vf.gradient(p.x, p.t).apply(v);
        }
        res = res - pressure_grad(prof, p.x, p.t);
        Vec3 F = force(p.x, p.t);
        res = res - F;
        double rel = res.norm() / (F.norm() + 1e-12);
        std::lock_guard<std::mutex> lk(mu);
        if (rel > rep.max_relative) {
            rep.max_relative = rel;
            rep.worst = p;
        }
    });
    return rep;
}

}  // namespace nsblow::potential
