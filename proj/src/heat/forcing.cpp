#include "nsblow/heat/forcing.hpp"

namespace nsblow::heat {

ForcingProfile make_profile(Variant variant, double T, double delta) {
    if (!(T > 0.0)) throw std::invalid_argument("make_profile: T must be positive");
    if (variant == Variant::ScaledLogB && !(delta > 0.0))
        throw std::invalid_argument("make_profile: delta must be positive");
    ForcingProfile p;
    p.variant = variant;
    p.T = T;
    p.delta = delta;
    return p;
}

Vec3 forcing_eval(const ForcingProfile& profile, const SpaceTimePoint& p) {
    if (!(p.t < profile.T))
        throw std::invalid_argument("forcing_eval: requires t < T");
    if (!(p.t >= 0.0))
        throw std::invalid_argument("forcing_eval: requires t >= 0");
    double q = p.x.norm2();
    double c = profile.T - p.t;
    double rho = density(q, c, profile.has_log()).v;
    return Vec3{-profile.scale() * rho, 0.0, 0.0};
}

}  // namespace nsblow::heat
