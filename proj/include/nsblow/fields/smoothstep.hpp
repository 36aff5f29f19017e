#pragma once

#include <cmath>

namespace nsblow {

/// The standard exponential glue e^{-1/s}, extended by 0 for s <= 0,
/// together with the C-infinity step S(s) = g(s) / (g(s) + g(1-s))
/// (S = 0 for s <= 0, S = 1 for s >= 1) and its derivatives.
inline double exp_glue(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
inline double exp_glue_d1(double s) {
    return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0;
}
inline double exp_glue_d2(double s) {
    if (s <= 0.0) return 0.0;
    double g = std::exp(-1.0 / s);
    return g * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
}

inline double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = exp_glue(s), b = exp_glue(1.0 - s);
    return a / (a + b);
}

inline double smooth_step_d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    double a = exp_glue(s), b = exp_glue(1.0 - s);
    double a1 = exp_glue_d1(s), b1 = exp_glue_d1(1.0 - s);
    double D = a + b;
    return (a1 * b + a * b1) / (D * D);
}

inline double smooth_step_d2(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    double a = exp_glue(s), b = exp_glue(1.0 - s);
    double a1 = exp_glue_d1(s), b1 = exp_glue_d1(1.0 - s);
    double a2 = exp_glue_d2(s), b2 = exp_glue_d2(1.0 - s);
    double D = a + b, Dp = a1 - b1;
    double N = a1 * b + a * b1;
    double Np = a2 * b - a * b2;
    return (Np * D - 2.0 * N * Dp) / (D * D * D);
}

}  // namespace nsblow
