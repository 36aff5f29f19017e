#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace nsblow {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }

struct Mat3 {
    std::array<std::array<double, 3>, 3> a{};

    double& operator()(int i, int j) { return a[i][j]; }
    double operator()(int i, int j) const { return a[i][j]; }
    double trace() const { return a[0][0] + a[1][1] + a[2][2]; }
    double frobenius() const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += a[i][j] * a[i][j];
        return std::sqrt(s);
    }
    Vec3 apply(const Vec3& v) const {
        return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
                a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
                a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
    }
};

struct SpaceTimePoint {
    Vec3 x;
    double t = 0.0;
};

/// Quadrature could not reach the requested accuracy; carries the estimate
/// actually achieved.
class AccuracyError : public std::runtime_error {
  public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

/// Two independent evaluation routes disagreed beyond their combined budget.
class CrossValidationError : public std::runtime_error {
  public:
    CrossValidationError(const std::string& what, double disagreement)
        : std::runtime_error(what), disagreement(disagreement) {}
    double disagreement;
};

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Runs fn(i) for i in [0, n) on a worker pool. Worker count comes from
/// NSBLOW_WORKERS, defaulting to hardware concurrency. fn must be safe to
/// call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

int worker_count();

}  // namespace nsblow
