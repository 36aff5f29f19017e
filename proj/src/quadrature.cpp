#include "nsblow/fields/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nsblow {

namespace {

GaussLegendre compute_gl(int order) {
    GaussLegendre gl;
    gl.nodes.resize(order);
    gl.weights.resize(order);
    // Newton iteration on Legendre polynomials, Chebyshev initial guess.
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[order - 1 - i] = x;
        gl.weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return gl;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
    return it->second;
}

double gl_panel(const std::function<double(double)>& f, double a, double b,
                int order) {
    const auto& gl = GaussLegendre::get(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i)
        sum += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return sum * half;
}

double gl_panels(const std::function<double(double)>& f,
                 const std::vector<double>& breaks, int order) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) sum += gl_panel(f, breaks[i], breaks[i + 1], order);
    return sum;
}

std::vector<double> make_breaks(std::vector<double> pts, double lo, double hi) {
    std::vector<double> out{lo, hi};
    for (double p : pts)
        if (p > lo && p < hi) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-300 || b - a < 1e-13 * (std::abs(a) + 1.0); }),
              out.end());
    return out;
}

UniformSpline::UniformSpline(double x0, double dx, std::vector<double> values)
    : x0_(x0), dx_(dx), n_(values.size()), y_(std::move(values)) {
    if (n_ < 5) throw std::invalid_argument("UniformSpline: need >= 5 nodes");
    const std::size_t n = n_;
    d_.assign(n, 0.0);
    // Clamped end slopes from 4th-order one-sided differences.
    d_[0] = (-25 * y_[0] + 48 * y_[1] - 36 * y_[2] + 16 * y_[3] - 3 * y_[4]) /
            (12 * dx_);
    d_[n - 1] = (25 * y_[n - 1] - 48 * y_[n - 2] + 36 * y_[n - 3] -
                 16 * y_[n - 4] + 3 * y_[n - 5]) /
                (12 * dx_);
    // Tridiagonal solve: d[i-1] + 4 d[i] + d[i+1] = 3 (y[i+1]-y[i-1]) / dx.
    std::vector<double> c(n, 0.0), rhs(n, 0.0);
    double beta = 4.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        rhs[i] = 3.0 * (y_[i + 1] - y_[i - 1]) / dx_;
    rhs[1] -= d_[0];
    rhs[n - 2] -= d_[n - 1];
    // Thomas algorithm on the interior system (indices 1..n-2).
    c[1] = 1.0 / beta;
    d_[1] = rhs[1] / beta;
    for (std::size_t i = 2; i + 1 < n; ++i) {
        double m = beta - c[i - 1];
        c[i] = 1.0 / m;
        d_[i] = (rhs[i] - d_[i - 1]) / m;
    }
    for (std::size_t i = n - 3; i >= 1; --i) {
        d_[i] -= c[i] * d_[i + 1];
        if (i == 1) break;
    }
}

double UniformSpline::operator()(double x) const {
    double u = (x - x0_) / dx_;
    auto last = static_cast<double>(n_ - 1);
    if (u <= 0.0) u = 0.0;
    if (u >= last) u = last;
    auto i = static_cast<std::size_t>(u);
    if (i >= n_ - 1) i = n_ - 2;
    double s = u - static_cast<double>(i);
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    double h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s);
    double h11 = s * s * (s - 1);
    return h00 * y_[i] + h10 * dx_ * d_[i] + h01 * y_[i + 1] +
           h11 * dx_ * d_[i + 1];
}

double UniformSpline::derivative(double x) const {
    double u = (x - x0_) / dx_;
    auto last = static_cast<double>(n_ - 1);
    if (u <= 0.0) u = 0.0;
    if (u >= last) u = last;
    auto i = static_cast<std::size_t>(u);
    if (i >= n_ - 1) i = n_ - 2;
    double s = u - static_cast<double>(i);
    double g00 = 6 * s * (s - 1);
    double g10 = (1 - s) * (1 - 3 * s);
    double g01 = -g00;
    double g11 = s * (3 * s - 2);
    return (g00 * y_[i] + g01 * y_[i + 1]) / dx_ + g10 * d_[i] + g11 * d_[i + 1];
}

}  // namespace nsblow
