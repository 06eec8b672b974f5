#pragma once

#include "oseen/field.hpp"
#include "oseen/lorentz.hpp"
#include "oseen/solver.hpp"

namespace oseen {

/// Circulation alpha (the total vorticity mass) and the core time t_c > 0
/// that regularizes the t = 0 singularity of the point vortex.
struct OseenParams {
    double alpha = 1.0;
    double core_time = 1.0;

    OseenParams() = default;
    /// Throws std::invalid_argument unless core_time > 0 and alpha is finite.
    OseenParams(double alpha_, double core_time_);
};

/// Default core time 4*dx^2, so the mollified core spans at least two cells.
double default_core_time(const Grid& g);

/// alpha * x_perp/(2*pi*|x|^2) * (1 - exp(-|x|^2/4t)) with x_perp = (-y, x);
/// the origin value is 0 (removable singularity). Throws for t <= 0.
VectorField2 lamb_oseen_velocity(const OseenParams& params, double t, const Grid& g);

/// alpha/(4*pi*t) * exp(-|x|^2/4t), the curl of the velocity. Its box
/// integral is alpha up to the Gaussian tail. Throws for t <= 0.
ScalarField lamb_oseen_vorticity(const OseenParams& params, double t, const Grid& g);

/// Band-limited counterpart of lamb_oseen_vorticity: the Gaussian is
/// synthesized mode by mode in Fourier space instead of sampled, so the
/// discrete heat flow of the result is exactly the field at a later time.
/// Throws for t <= 0.
ScalarField lamb_oseen_vorticity_spectral(const OseenParams& params, double t, const Grid& g);

/// The mollified singular vortex: lamb_oseen_velocity at t = core_time. Its
/// exact evolution stays closed-form (the vortex at core_time + t).
VectorField2 initial_vortex(const OseenParams& params, const Grid& g);

/// Series y_i = t_i^(1/2 - 1/p) * ||v(t_i)||_p over the trajectory's
/// snapshots (target exponent 0); constant for a self-similar flow.
/// Snapshots at t = 0 are skipped. Requires p >= 1.
DecaySeries self_similar_residual(const Trajectory& traj, double p);

} // namespace oseen
