#pragma once

#include "nsblow/potential/velocity.hpp"
#include "nsblow/stokes/stokes.hpp"

namespace nsblow::stokes {

struct PicardOptions {
    double L = 12.0;
    int n = 48;
    int k_max = 8;       // geometric time mesh depth; midpoints are inserted
    double tol = 1e-6;   // weighted-norm convergence threshold
    int m_max = 12;
};

/// One iteration record: the weighted norm sup (1+|x|)^2 |u| measured on the
/// grid-node probe cloud over all mesh times, and the empirical contraction
/// ratio between successive increments.
struct PicardState {
    double delta = 0.0;
    double eta = 0.0;
    int iterations = 0;
    double x_norm = 0.0;            // of the final iterate
    double contraction_ratio = 0.0; // worst ratio observed
    double residual = 0.0;          // x_norm(u - M u) at the returned iterate
    bool converged = false;
    bool contained = false;         // every iterate stayed within eta
    bool contracting = false;       // every ratio < 1
    bool diverged = false;          // x_norm exceeded 10 * eta
};

struct PicardTrace {
    std::vector<double> x_norms;  // per iterate
    std::vector<double> diffs;    // x_norm of successive differences
    std::vector<double> ratios;   // diffs[m] / diffs[m-1]
    PicardState state;
};

/// Fixed-point solver for the perturbation u of the small-amplitude linear
/// flow Z = delta * (base velocity):
///   u = M(u),   M(u)(t) = -int_0^t e^{(t-s) Lap} P div((Z+u) x (Z+u)) ds,
/// assembled spectrally in divergence form on the periodic box.
class PicardSolver {
public:
    /// base: the unit-amplitude velocity field (log-damped variant); Z scales
    /// linearly with delta, so one base serves every candidate amplitude.
    PicardSolver(const potential::VelocityField& base, double delta,
                 PicardOptions opt = {});

    const std::vector<double>& mesh() const { return mesh_; }
    const PicardOptions& options() const { return opt_; }
    double delta() const { return delta_; }
    const potential::VelocityField& base() const { return base_; }

    /// Z = delta * base on the grid at mesh time index q (cached).
    const VectorGrid& z_grid(std::size_t q) const;

    /// One application of M to the snapshot sequence u (empty = zero field).
    std::vector<VectorGrid> map(const std::vector<VectorGrid>& u) const;

    /// M(u) evaluated at one arbitrary time (for time differentiation).
    VectorGrid map_at(const std::vector<VectorGrid>& u, double t) const;

    /// sup over grid nodes and mesh times of (1+|x|)^2 |u|.
    double x_norm(const std::vector<VectorGrid>& u) const;

    /// Iterate from u = 0; eta = 0 engages the 4 * x_norm(M(0)) rule.
    PicardTrace solve(double eta = 0.0, double tol = 0.0, int m_max = 0) const;

    const std::vector<VectorGrid>& fixed_point() const { return fixed_; }
    bool has_fixed_point() const { return !fixed_.empty(); }
    PicardTrace solve_and_store(double eta = 0.0);

    /// Max relative residual of the perturbed momentum equation at interior
    /// grid nodes for the assembled v = Z + u, measured against the forcing.
    double nse_residual(const std::vector<VectorGrid>& u,
                        const std::vector<double>& check_times,
                        double probe_radius = 3.0) const;

private:
    const potential::VelocityField& base_;
    double delta_;
    PicardOptions opt_;
    std::vector<double> mesh_;
    mutable std::vector<VectorGrid> zcache_;
    mutable std::mutex mu_;
    mutable std::vector<VectorGrid> fixed_;
};

struct DeltaSearchResult {
    double delta_hat = 0.0;  // largest passing candidate (0 = none passed)
    double eta_hat = 0.0;
    std::vector<std::pair<double, bool>> trials;
};

/// Scans the candidate amplitudes (descending) with the eta rule and reports
/// the largest delta whose iteration converges, stays contained, and
/// contracts.
DeltaSearchResult delta0_search(const potential::VelocityField& base,
                                std::vector<double> candidates,
                                const PicardOptions& opt = {});

/// The assembled solution v = Z + u with u interpolated between snapshots.
class BlowupSolution {
public:
    BlowupSolution(const PicardSolver& solver);
    Vec3 operator()(const Vec3& x, double t) const;
    Vec3 z_part(const Vec3& x, double t) const;
    Vec3 u_part(const Vec3& x, double t) const;

private:
    const PicardSolver& solver_;
};

}  // namespace nsblow::stokes
