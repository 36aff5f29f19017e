#include "nsblow/fields/grids.hpp"

#include <cmath>
#include <stdexcept>

namespace nsblow {

TimeLadder make_time_ladder(double T, int k_max) {
    if (!(T > 0.0)) throw std::invalid_argument("make_time_ladder: T must be positive");
    if (k_max < 1) throw std::invalid_argument("make_time_ladder: k_max must be >= 1");
    TimeLadder ladder;
    ladder.T = T;
    ladder.k_max = k_max;
    ladder.levels.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k)
        ladder.levels.push_back(T * (1.0 - std::ldexp(1.0, -k)));
    return ladder;
}

SampleGrid make_sample_grid(double L, int n, double shell_r0, int shell_count) {
    if (!(L > 0.0)) throw std::invalid_argument("make_sample_grid: L must be positive");
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("make_sample_grid: n must be even and >= 2");
    return SampleGrid{L, n, shell_r0, shell_count};
}

std::vector<double> SampleGrid::shell_radii() const {
    std::vector<double> out;
    if (shell_r0 <= 0.0) return out;
    double r = shell_r0;
    for (int m = 0; m < shell_count; ++m) {
        out.push_back(r);
        r *= 2.0;
    }
    return out;
}

const std::vector<Vec3>& probe_directions() {
    static const std::vector<Vec3> dirs = [] {
        std::vector<Vec3> d;
        const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0);
        for (double sx : {-1.0, 1.0}) {
            d.push_back({sx, 0, 0});
            d.push_back({0, sx, 0});
            d.push_back({0, 0, sx});
            for (double sy : {-1.0, 1.0}) {
                d.push_back({sx * s2, sy * s2, 0});
                d.push_back({sx * s2, 0, sy * s2});
                d.push_back({0, sx * s2, sy * s2});
                for (double sz : {-1.0, 1.0})
                    d.push_back({sx * s3, sy * s3, sz * s3});
            }
        }
        return d;
    }();
    return dirs;
}

}  // namespace nsblow
