#include "nsblow/stokes/stokes.hpp"

#include <cmath>

#include "nsblow/fields/quadrature.hpp"
#include "spectral.hpp"

namespace nsblow::stokes {

VectorGrid make_vector_grid(double L, int n) {
    VectorGrid g;
    g.L = L;
    g.n = n;
    g.dx = 2.0 * L / n;
    std::size_t sz = static_cast<std::size_t>(n) * n * n;
    for (auto& c : g.comp) c.assign(sz, 0.0);
    return g;
}

Vec3 VectorGrid::node(int ix, int iy, int iz) const {
    std::size_t idx =
        (static_cast<std::size_t>(ix) * n + iy) * n + iz;
    return {comp[0][idx], comp[1][idx], comp[2][idx]};
}

Vec3 VectorGrid::node_point(int ix, int iy, int iz) const {
    return {-L + ix * dx, -L + iy * dx, -L + iz * dx};
}

Vec3 VectorGrid::at(const Vec3& x) const {
    if (empty()) return {};
    double u[3];
    for (int d = 0; d < 3; ++d) {
        u[d] = (x[d] + L) / dx;
        if (u[d] < 0.0 || u[d] > n - 1.0) return {};
    }
    int i0[3];
    double w[3];
    for (int d = 0; d < 3; ++d) {
        i0[d] = std::min(static_cast<int>(u[d]), n - 2);
        w[d] = u[d] - i0[d];
    }
    Vec3 out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                double wt = (a ? w[0] : 1.0 - w[0]) * (b ? w[1] : 1.0 - w[1]) *
                            (c ? w[2] : 1.0 - w[2]);
                if (wt == 0.0) continue;
                out += node(i0[0] + a, i0[1] + b, i0[2] + c) * wt;
            }
    return out;
}

double VectorGrid::max_norm() const {
    if (empty()) return 0.0;
    double m = 0.0;
    for (std::size_t idx = 0; idx < comp[0].size(); ++idx) {
        Vec3 v{comp[0][idx], comp[1][idx], comp[2][idx]};
        m = std::max(m, v.norm2());
    }
    return std::sqrt(m);
}

StokesPropagator::StokesPropagator(double L, int n) : L_(L), n_(n) {
    if (L <= 0.0 || n < 8 || n % 2 != 0)
        throw std::invalid_argument("StokesPropagator: bad box parameters");
}

namespace {
void sample_on_grid(const detail::Box& box,
                    const std::function<Vec3(const Vec3&)>& field,
                    std::array<std::vector<double>, 3>& out) {
    for (auto& c : out) c.resize(box.real_size());
    double dx = box.dx();
    int n = box.n;
    parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t s) {
        int ix = static_cast<int>(s) / n, iy = static_cast<int>(s) % n;
        double x = -box.L + ix * dx, y = -box.L + iy * dx;
        for (int iz = 0; iz < n; ++iz) {
            Vec3 v = field({x, y, -box.L + iz * dx});
            out[0][s * n + iz] = v.x;
            out[1][s * n + iz] = v.y;
            out[2][s * n + iz] = v.z;
        }
    });
}
}  // namespace

VectorGrid StokesPropagator::duhamel(
    const std::function<Vec3(const Vec3&, double)>& force, double t,
    int levels, int gl_order) const {
    if (!(t >= 0.0)) throw std::invalid_argument("duhamel: t must be >= 0");
    detail::Box box{L_, n_};
    VectorGrid out = make_vector_grid(L_, n_);
    if (t == 0.0) return out;

    std::array<detail::cvec, 3> acc;
    for (auto& a : acc) a.assign(box.spec_size(), 0.0);

    // geometric panels in u = t - s refined toward u = 0
    std::vector<double> breaks{0.0};
    for (int j = levels; j >= 0; --j) breaks.push_back(t * std::pow(2.0, -j));
    const GaussLegendre& gl = GaussLegendre::get(gl_order);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        double mid = 0.5 * (breaks[p] + breaks[p + 1]);
        double half = 0.5 * (breaks[p + 1] - breaks[p]);
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            double u = mid + half * gl.nodes[q];
            double w = half * gl.weights[q];
            double s = t - u;
            std::array<std::vector<double>, 3> samples;
            sample_on_grid(
                box, [&](const Vec3& x) { return force(x, s); }, samples);
            std::array<detail::cvec, 3> hat;
            for (int i = 0; i < 3; ++i)
                detail::fft_r2c(box, std::move(samples[i]), hat[i]);
            detail::leray(box, hat);
            detail::for_each_mode(
                box, [&](const Vec3&, double q2, std::size_t idx) {
                    double fac = w * std::exp(-q2 * u);
                    for (int i = 0; i < 3; ++i) acc[i][idx] += fac * hat[i][idx];
                });
        }
    }
    for (int i = 0; i < 3; ++i) detail::fft_c2r(box, acc[i], out.comp[i]);
    return out;
}

VectorGrid StokesPropagator::project(
    const std::function<Vec3(const Vec3&)>& field) const {
    detail::Box box{L_, n_};
    std::array<std::vector<double>, 3> samples;
    sample_on_grid(box, field, samples);
    std::array<detail::cvec, 3> hat;
    for (int i = 0; i < 3; ++i)
        detail::fft_r2c(box, std::move(samples[i]), hat[i]);
    detail::leray(box, hat);
    VectorGrid out = make_vector_grid(L_, n_);
    for (int i = 0; i < 3; ++i) detail::fft_c2r(box, hat[i], out.comp[i]);
    return out;
}

}  // namespace nsblow::stokes
