#pragma once

#include <cmath>
#include <stdexcept>

#include "nsblow/common.hpp"

namespace nsblow::heat {

enum class Variant { CriticalA, CriticalLogB, ScaledLogB };

/// Which explicit force is in play and its final time.
///  CriticalA:   f = -e^{-|x|^2} / (|x|^2 + T - t) e1
///  CriticalLogB: the same with the extra 1 / (1 + |ln(|x|^2 + T - t)|)
///  ScaledLogB:  delta times CriticalLogB
struct ForcingProfile {
    Variant variant = Variant::CriticalA;
    double T = 1.0;
    double delta = 1.0;  // only meaningful for ScaledLogB

    double scale() const {
        return variant == Variant::ScaledLogB ? delta : 1.0;
    }
    bool has_log() const { return variant != Variant::CriticalA; }
};

ForcingProfile make_profile(Variant variant, double T, double delta = 1.0);

/// Radial forcing density rho(q; c) with q = |x|^2 and c = T - t, so that
/// f1 = -scale * rho. d1/d2 are derivatives in q.
struct DensityDerivs {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

inline DensityDerivs density(double q, double c, bool with_log) {
    double w = q + c;
    double E = std::exp(-q);
    double D, D1, D2;  // denominator and its q-derivatives
    if (!with_log) {
        D = w;
        D1 = 1.0;
        D2 = 0.0;
    } else {
        double lw = std::log(w);
        double sgn = lw > 0.0 ? 1.0 : (lw < 0.0 ? -1.0 : 0.0);
        double Ef = 1.0 + std::abs(lw);
        D = w * Ef;
        D1 = Ef + sgn;
        D2 = sgn / w;
    }
    DensityDerivs out;
    double P = 1.0 / D;
    double P1 = -D1 / (D * D);
    double P2 = -D2 / (D * D) + 2.0 * D1 * D1 / (D * D * D);
    out.v = E * P;
    out.d1 = E * (P1 - P);
    out.d2 = E * (P2 - 2.0 * P1 + P);
    return out;
}

/// Radial density as a function of r = |x| with r-derivatives.
struct RadialDensity {
    double v = 0.0, dr = 0.0, d2r = 0.0;
};

inline RadialDensity density_radial(double r, double c, bool with_log) {
    DensityDerivs d = density(r * r, c, with_log);
    RadialDensity out;
    out.v = d.v;
    out.dr = 2.0 * r * d.d1;
    out.d2r = 2.0 * d.d1 + 4.0 * r * r * d.d2;
    return out;
}

/// The closed-form force vector. Throws invalid_argument for t >= T.
Vec3 forcing_eval(const ForcingProfile& profile, const SpaceTimePoint& p);

}  // namespace nsblow::heat
