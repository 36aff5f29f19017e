#include "nsblow/potential/riesz.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <vector>

namespace nsblow::potential {

PVRiesz::PVRiesz(const heat::HeatSolutionEvaluator& ev, double t)
    : prof_(ev.profile(t)), t_(t), c_(ev.T() - t) {
    if (!(t > 0.0)) throw std::invalid_argument("PVRiesz: requires t > 0");
}

double PVRiesz::second(int i, int j, const Vec3& x) const {
    ScalarField field = [this](const Vec3& y) { return prof_.value(y.norm()); };
    return second_generic(field, i, j, x, prof_.value(x.norm()));
}

double PVRiesz::second_of_grad(int i, int j, int k, const Vec3& x) const {
    ScalarField field = [this, k](const Vec3& y) {
        double r = y.norm();
        if (r < 1e-12) return 0.0;
        return prof_.deriv(r) * y[k] / r;
    };
    double rho = x.norm();
    double local = rho < 1e-12 ? 0.0 : prof_.deriv(rho) * x[k] / rho;
    return second_generic(field, i, j, x, local);
}

double PVRiesz::second_generic(const ScalarField& field, int i, int j,
                               const Vec3& x, double local_value) const {
    double rho = x.norm();
    // orthonormal frame with e3 along x (any frame at the origin)
    Vec3 e3 = rho > 1e-12 ? x * (1.0 / rho) : Vec3{0.0, 0.0, 1.0};
    Vec3 seed = std::abs(e3.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 e1 = e3.cross(seed);
    e1 = e1 * (1.0 / e1.norm());
    Vec3 e2 = e3.cross(e1);

    const GaussLegendre& glm = GaussLegendre::get(gl_mu_);
    double wphi = 2.0 * M_PI / n_phi_;
    // (1/4pi) int (3 w_i w_j - delta_ij) field(x + r w) dOmega
    auto angular = [&](double r) {
        double acc = 0.0;
        for (std::size_t a = 0; a < glm.nodes.size(); ++a) {
            double mu = glm.nodes[a];
            double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            double wa = glm.weights[a] * wphi / (4.0 * M_PI);
            for (int b = 0; b < n_phi_; ++b) {
                double ph = wphi * b;
                Vec3 w = e1 * (sn * std::cos(ph)) + e2 * (sn * std::sin(ph)) +
                         e3 * mu;
                double ker = 3.0 * w[i] * w[j] - (i == j ? 1.0 : 0.0);
                acc += wa * ker * field(x + w * r);
            }
        }
        return acc;
    };

    double eps = 0.5 * eps0_;
    double r_out = rho + 12.0;
    std::vector<double> breaks{eps, eps0_};
    for (double r = 2.0 * eps0_; r < 1.0; r *= 2.0) breaks.push_back(r);
    for (double r = 1.0; r <= r_out + 0.5; r += 1.0) breaks.push_back(r);

    const GaussLegendre& glr = GaussLegendre::get(gl_r_);
    std::vector<double> panel(breaks.size() - 1, 0.0);
    parallel_for(panel.size(), [&](std::size_t p) {
        double lo = breaks[p], hi = breaks[p + 1];
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t q = 0; q < glr.nodes.size(); ++q) {
            double r = mid + half * glr.nodes[q];
            acc += glr.weights[q] * half * angular(r) / r;
        }
        panel[p] = acc;
    });
    double shell = panel[0];  // [eps/2, eps]
    double j_half = 0.0;
    for (double v : panel) j_half += v;
    // Richardson over {eps0, eps0/2}: (4 J(eps/2) - J(eps)) / 3
    double pv = j_half + shell / 3.0;
    return pv - (i == j ? local_value / 3.0 : 0.0);
}

namespace {
std::mutex g_fftw_mu;  // FFTW planning is not thread-safe

inline double freq(int m, int n, double L) {
    int k = m < n / 2 ? m : m - n;
    return M_PI / L * k;
}
}  // namespace

struct FourierRiesz::Impl {
    double L;
    int n;
    double dx;
    std::vector<std::complex<double>> spec;  // r2c spectrum of h1 samples
    std::mutex mu;
    std::map<int, std::shared_ptr<std::vector<double>>> grids;

    Impl(const heat::HeatSolutionEvaluator& ev, double t, double L_, int n_)
        : L(L_), n(n_), dx(2.0 * L_ / n_) {
        const heat::RadialProfile& prof = ev.profile(t);
        std::vector<double> in(static_cast<std::size_t>(n) * n * n);
        parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t s) {
            int ix = static_cast<int>(s) / n, iy = static_cast<int>(s) % n;
            double x = -L + ix * dx, y = -L + iy * dx;
            for (int iz = 0; iz < n; ++iz) {
                double z = -L + iz * dx;
                in[(s * n) + iz] = prof.value(std::sqrt(x * x + y * y + z * z));
            }
        });
        std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        spec.resize(nc);
        std::lock_guard<std::mutex> lk(g_fftw_mu);
        fftw_plan plan = fftw_plan_dft_r2c_3d(
            n, n, n, in.data(), reinterpret_cast<fftw_complex*>(spec.data()),
            FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    // key encodes the symbol: -xi_i xi_j / |xi|^2, optionally times i xi_k
    const std::vector<double>& grid(int i, int j, int k /* -1: none */) {
        int key = (i * 3 + j) * 4 + (k + 1);
        {
            std::lock_guard<std::mutex> lk(mu);
            auto it = grids.find(key);
            if (it != grids.end()) return *it->second;
        }
        std::size_t nz = n / 2 + 1;
        std::vector<std::complex<double>> work(spec.size());
        double scale = 1.0 / (static_cast<double>(n) * n * n);
        parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t s) {
            int mx = static_cast<int>(s) / n, my = static_cast<int>(s) % n;
            Vec3 xi{freq(mx, n, L), freq(my, n, L), 0.0};
            for (std::size_t mz = 0; mz < nz; ++mz) {
                xi.z = M_PI / L * static_cast<double>(mz);
                double q2 = xi.norm2();
                std::size_t idx = s * nz + mz;
                if (q2 == 0.0) {
                    work[idx] = 0.0;
                    continue;
                }
                std::complex<double> m(-xi[i] * xi[j] / q2, 0.0);
                if (k >= 0) m *= std::complex<double>(0.0, xi[k]);
                work[idx] = spec[idx] * m * scale;
            }
        });
        auto out = std::make_shared<std::vector<double>>(
            static_cast<std::size_t>(n) * n * n);
        {
            std::lock_guard<std::mutex> lk(g_fftw_mu);
            fftw_plan plan = fftw_plan_dft_c2r_3d(
                n, n, n, reinterpret_cast<fftw_complex*>(work.data()),
                out->data(), FFTW_ESTIMATE);
            fftw_execute(plan);
            fftw_destroy_plan(plan);
        }
        std::lock_guard<std::mutex> lk(mu);
        auto [it, ins] = grids.emplace(key, std::move(out));
        return *it->second;
    }

    int snap_index(double v) const {
        int m = static_cast<int>(std::lround((v + L) / dx));
        return std::min(std::max(m, 0), n - 1);
    }

    double at(const std::vector<double>& g, const Vec3& x) const {
        std::size_t ix = snap_index(x.x), iy = snap_index(x.y),
                    iz = snap_index(x.z);
        return g[(ix * static_cast<std::size_t>(n) + iy) * n + iz];
    }
};

FourierRiesz::FourierRiesz(const heat::HeatSolutionEvaluator& ev, double t,
                           double L, int n)
    : impl_(std::make_shared<Impl>(ev, t, L, n)) {}

double FourierRiesz::second(int i, int j, const Vec3& x) const {
    return impl_->at(impl_->grid(i, j, -1), x);
}

double FourierRiesz::second_of_grad(int i, int j, int k, const Vec3& x) const {
    return impl_->at(impl_->grid(i, j, k), x);
}

Vec3 FourierRiesz::snap(const Vec3& x) const {
    return {-impl_->L + impl_->snap_index(x.x) * impl_->dx,
            -impl_->L + impl_->snap_index(x.y) * impl_->dx,
            -impl_->L + impl_->snap_index(x.z) * impl_->dx};
}

double riesz_second_checked(const PVRiesz& pv, const FourierRiesz& fr, int i,
                            int j, const Vec3& x) {
    Vec3 xs = fr.snap(x);
    double a = pv.second(i, j, xs);
    double b = fr.second(i, j, xs);
    double disagreement = std::abs(a - b);
    double tol = 10.0 * (pv.error_budget() + fr.error_budget());
    if (disagreement > tol)
        throw CrossValidationError("Riesz transform routes disagree", disagreement);
    return a;
}

}  // namespace nsblow::potential
