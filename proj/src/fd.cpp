#include "nsblow/fields/fd.hpp"

#include <stdexcept>

namespace nsblow {

Vec3 fd_gradient(const SpaceTimeField& f, const Vec3& x, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        Vec3 e;
        e[a] = 1.0;
        double fm2 = f(x - 2.0 * h * e, t), fm1 = f(x - h * e, t);
        double fp1 = f(x + h * e, t), fp2 = f(x + 2.0 * h * e, t);
        g[a] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    }
    return g;
}

double fd_laplacian(const SpaceTimeField& f, const Vec3& x, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_laplacian: step must be positive");
    double f0 = f(x, t);
    double lap = 0.0;
    for (int a = 0; a < 3; ++a) {
        Vec3 e;
        e[a] = 1.0;
        double fm2 = f(x - 2.0 * h * e, t), fm1 = f(x - h * e, t);
        double fp1 = f(x + h * e, t), fp2 = f(x + 2.0 * h * e, t);
        lap += (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) /
               (12.0 * h * h);
    }
    return lap;
}

double fd_time(const SpaceTimeField& f, const Vec3& x, double t, double h,
               double t_max) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_time: step must be positive");
    auto at = [&](double s) { return f(x, s); };
    if (t - 2.0 * h >= 0.0 && t + 2.0 * h < t_max) {
        return (at(t - 2 * h) - 8 * at(t - h) + 8 * at(t + h) - at(t + 2 * h)) /
               (12.0 * h);
    }
    if (t + 4.0 * h < t_max) {  // forward 5-point, 4th order
        return (-25 * at(t) + 48 * at(t + h) - 36 * at(t + 2 * h) +
                16 * at(t + 3 * h) - 3 * at(t + 4 * h)) /
               (12.0 * h);
    }
    if (t - 4.0 * h >= 0.0) {  // backward 5-point, 4th order
        return (25 * at(t) - 48 * at(t - h) + 36 * at(t - 2 * h) -
                16 * at(t - 3 * h) + 3 * at(t - 4 * h)) /
               (12.0 * h);
    }
    throw std::invalid_argument("fd_time: stencil does not fit in (0, t_max)");
}

}  // namespace nsblow
