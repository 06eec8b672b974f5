#pragma once

#include <array>
#include <string>
#include <vector>

#include "oseen/field.hpp"

namespace oseen {

/// plane / stokes_plane integrate the vorticity equation on the periodic
/// box; exterior / stokes_exterior integrate the velocity form with a
/// penalized disk obstacle. The stokes_* modes drop the advection term.
enum class SimMode { plane, exterior, stokes_plane, stokes_exterior };

/// Integration parameters. Viscosity is fixed at 1; all rates assume it.
struct SimConfig {
    Grid grid;
    double dt = 0.0;
    double t_end = 0.0;
    int snapshot_every = 1; // steps between stored snapshots
    SimMode mode = SimMode::plane;
    double penalization_eta = -1.0; // exterior modes; negative = dt/10
    double obstacle_radius = -1.0;  // negative = ball_radius/4; 0 disables the mask
    bool adaptive_dt = true;        // false: a CFL violation throws instead of substepping
    // Box mean of the velocity, conserved by every mode. The vorticity-form
    // solver cannot see it (biot_savart returns the mean-zero part), so it
    // rides along here and seeds the initial state.
    std::array<double, 2> mean_velocity{0.0, 0.0};

    SimConfig(const Grid& g, double dt_, double t_end_) : grid(g), dt(dt_), t_end(t_end_) {}
};

double resolved_eta(const SimConfig& config);
double resolved_obstacle_radius(const SimConfig& config);
bool velocity_form_mode(SimMode mode);

/// Throws std::invalid_argument on: dt <= 0, t_end < 0, snapshot_every < 1,
/// obstacle_radius >= ball_radius/2, or penalization_eta > dt.
void validate(const SimConfig& config);

/// Instantaneous solver state. Plane modes evolve `vorticity` (velocity is
/// derived on demand); exterior modes evolve `velocity` directly. The unused
/// field stays zero; `velocity_form` says which one is live.
struct SimState {
    double time = 0.0;
    long step_count = 0;
    ScalarField vorticity;
    VectorField2 velocity;
    bool velocity_form = false;
    std::array<double, 2> mean_velocity{0.0, 0.0}; // plane modes only
    long cfl_reductions = 0; // substep events forced by the CFL bound

    SimState() = default;
    explicit SimState(const Grid& g) : vorticity(g), velocity(g) {}
};

/// Ordered snapshot list; snapshot times are strictly increasing and start
/// at the initial time.
struct Trajectory {
    SimConfig config;
    std::vector<SimState> snapshots;

    explicit Trajectory(const SimConfig& c) : config(c) {}
};

/// Plane-mode state from initial vorticity (mean velocity from the config).
SimState make_initial_state(const SimConfig& config, const ScalarField& omega0);
/// Exterior-mode state from initial velocity.
SimState make_initial_state(const SimConfig& config, const VectorField2& u0);

/// The live velocity: biot_savart(vorticity) + mean in plane modes, the
/// stored field in exterior modes.
VectorField2 state_velocity(const SimState& state);

/// Largest stable step 0.5*dx/max|v|; infinite for a still field.
double cfl_limit(const SimState& state, const SimConfig& config);

/// One integrating-factor RK3 step of the vorticity equation. The viscous
/// factor is exact per mode; advection is dealiased (2/3 rule) and skipped
/// when advect is false (stokes_plane and the pure-diffusion hook). A step
/// exceeding the CFL bound is split into equal substeps (logged in
/// cfl_reductions) unless adaptive_dt is off, which throws. Non-finite
/// output aborts with a diagnostic.
SimState step_plane(const SimState& state, const SimConfig& config, double dt,
                    bool advect = true);

/// One velocity-form step: dealiased advection with pressure projection and
/// the exact viscous factor, then the implicit penalization update
/// u <- u/(1 + chi*dt/eta) on the obstacle disk, then re-projection.
/// obstacle_radius = 0 reduces to the plane algorithm in velocity form.
SimState step_exterior(const SimState& state, const SimConfig& config, double dt,
                       bool advect = true);

/// The implicit penalization update alone (no re-projection): divides the
/// field by 1 + dt/eta at nodes inside the obstacle disk.
VectorField2 apply_penalization(const VectorField2& u, double obstacle_radius, double dt,
                                double eta);

/// Advances one configured step (mode dispatch) and stamps time/step_count.
SimState advance(const SimState& state, const SimConfig& config);

/// Runs config.mode with the advection term disabled, from divergence-free
/// v0. In plane modes this is the exact per-mode heat flow of the vorticity
/// (projection commutes with it); exterior modes keep the penalization.
Trajectory stokes_evolve(const VectorField2& v0, const SimConfig& config);

/// Full run: snapshots at the configured cadence plus the initial and final
/// states. With a nonempty output_dir, writes NSF2 snapshots and appends to
/// diagnostics.csv (`step,t,energy,enstrophy,max_u,obstacle_leak`) as it
/// goes, so a later abort leaves the rows written so far on disk. Energy is
/// the box integral of |v|^2, enstrophy of omega^2; obstacle_leak is
/// max|u| inside the obstacle disk.
Trajectory run(const SimConfig& config, const ScalarField& omega0,
               const std::string& output_dir = "");
Trajectory run(const SimConfig& config, const VectorField2& u0,
               const std::string& output_dir = "");

} // namespace oseen
