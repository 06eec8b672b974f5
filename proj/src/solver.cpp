#include "oseen/solver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "oseen/operators.hpp"
#include "oseen/snapshot.hpp"
#include "oseen/spectral.hpp"

namespace oseen {

namespace {

// Hard cap on CFL subdivisions per requested step; hitting it means the
// velocity is running away and the finite check would fail soon anyway.
constexpr int kMaxSubsteps = 100000;

double max_speed(const VectorField2& v) {
    const int n = v.grid().n_points;
    double m = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) m = std::max(m, std::hypot(v.x(ix, iy), v.y(ix, iy)));
    return m;
}

std::array<double, 2> box_mean(const VectorField2& v) {
    double sx = 0.0, sy = 0.0;
    for (double a : v.x.data) sx += a;
    for (double a : v.y.data) sy += a;
    const double inv = 1.0 / static_cast<double>(v.grid().size());
    return {sx * inv, sy * inv};
}

// Multiplies every mode by exp(-|k|^2 s): the exact heat propagator.
void apply_heat(SpectralField& c, double s) {
    const Grid& g = c.grid;
    for (int my = 0; my < g.n_points; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < g.n_points; ++mx) {
            const double kx = g.wavenumber(mx);
            c(mx, my) *= std::exp(-(kx * kx + ky * ky) * s);
        }
    }
}

void apply_heat(SpectralVector2& c, double s) {
    apply_heat(c.x, s);
    apply_heat(c.y, s);
}

void axpy(SpectralField& out, double a, const SpectralField& in) {
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += a * in.data[i];
}

void axpy(SpectralVector2& out, double a, const SpectralVector2& in) {
    axpy(out.x, a, in.x);
    axpy(out.y, a, in.y);
}

// Vorticity advection term N(w) = -dealias(v . grad w) with
// v = biot_savart(w) + mean. The zero mode is forced to 0: the continuum
// term is a divergence, so any discrete residue there is pure roundoff.
struct PlaneRhs {
    std::array<double, 2> mean;

    SpectralField operator()(const SpectralField& w, double* speed_out = nullptr) const {
        const Grid& g = w.grid;
        SpectralVector2 vs = biot_savart(w);
        VectorField2 v = to_physical(vs);
        for (double& a : v.x.data) a += mean[0];
        for (double& a : v.y.data) a += mean[1];
        if (speed_out) *speed_out = max_speed(v);
        const ScalarField wx = to_physical(derivative(w, 1));
        const ScalarField wy = to_physical(derivative(w, 2));
        ScalarField adv(g);
        for (size_t i = 0; i < adv.data.size(); ++i)
            adv.data[i] = v.x.data[i] * wx.data[i] + v.y.data[i] * wy.data[i];
        SpectralField rhs = to_spectral(adv);
        dealias(rhs);
        for (auto& c : rhs.data) c = -c;
        rhs(0, 0) = 0.0;
        return rhs;
    }
};

// Velocity advection term N(u) = -P dealias((u . grad) u). Projection at
// every stage keeps the stages divergence-free; the zero mode is scrubbed
// for the same reason as in PlaneRhs, which conserves the box mean.
struct ExteriorRhs {
    SpectralVector2 operator()(const SpectralVector2& us, double* speed_out = nullptr) const {
        const Grid& g = us.grid();
        const VectorField2 u = to_physical(us);
        if (speed_out) *speed_out = max_speed(u);
        const ScalarField u1x = to_physical(derivative(us.x, 1));
        const ScalarField u1y = to_physical(derivative(us.x, 2));
        const ScalarField u2x = to_physical(derivative(us.y, 1));
        const ScalarField u2y = to_physical(derivative(us.y, 2));
        VectorField2 adv(g);
        for (size_t i = 0; i < adv.x.data.size(); ++i) {
            adv.x.data[i] = u.x.data[i] * u1x.data[i] + u.y.data[i] * u1y.data[i];
            adv.y.data[i] = u.x.data[i] * u2x.data[i] + u.y.data[i] * u2y.data[i];
        }
        SpectralVector2 rhs = to_spectral(adv);
        dealias(rhs.x);
        dealias(rhs.y);
        leray_project(rhs);
        for (auto& c : rhs.x.data) c = -c;
        for (auto& c : rhs.y.data) c = -c;
        rhs.x(0, 0) = 0.0;
        rhs.y(0, 0) = 0.0;
        return rhs;
    }
};

// One integrating-factor RK3 substep of d/dt c = Laplacian(c) + N(c):
// classic third-order Kutta stages conjugated by the exact heat factor.
template <typename State, typename Rhs>
State if_rk3_substep(const State& c0, double h, const Rhs& rhs, const State& n0) {
    State ca = c0;
    axpy(ca, 0.5 * h, n0);
    apply_heat(ca, 0.5 * h);
    const State na = rhs(ca);

    State cb = c0;
    axpy(cb, -h, n0);
    apply_heat(cb, h);
    State na_shift = na;
    apply_heat(na_shift, 0.5 * h);
    axpy(cb, 2.0 * h, na_shift);
    const State nb = rhs(cb);

    State c1 = c0;
    axpy(c1, h / 6.0, n0);
    apply_heat(c1, h);
    axpy(c1, 4.0 * h / 6.0, na_shift);
    axpy(c1, h / 6.0, nb);
    return c1;
}

[[noreturn]] void abort_non_finite(const char* where, const SimState& s) {
    throw std::runtime_error(std::string(where) + ": non-finite field at t=" +
                             std::to_string(s.time) + ", step " + std::to_string(s.step_count));
}

std::string format_row(long step, double t, double energy, double enstrophy, double max_u,
                       double leak) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%.17g", step, t, energy,
                  enstrophy, max_u, leak);
    return buf;
}

} // namespace

double resolved_eta(const SimConfig& config) {
    return config.penalization_eta < 0.0 ? config.dt / 10.0 : config.penalization_eta;
}

double resolved_obstacle_radius(const SimConfig& config) {
    return config.obstacle_radius < 0.0 ? config.grid.ball_radius / 4.0 : config.obstacle_radius;
}

bool velocity_form_mode(SimMode mode) {
    return mode == SimMode::exterior || mode == SimMode::stokes_exterior;
}

void validate(const SimConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("SimConfig: need dt > 0");
    if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end))
        throw std::invalid_argument("SimConfig: need t_end >= 0");
    if (config.snapshot_every < 1)
        throw std::invalid_argument("SimConfig: need snapshot_every >= 1");
    if (!std::isfinite(config.mean_velocity[0]) || !std::isfinite(config.mean_velocity[1]))
        throw std::invalid_argument("SimConfig: mean_velocity must be finite");
    const double rob = resolved_obstacle_radius(config);
    if (!(rob >= 0.0) || !(rob < 0.5 * config.grid.ball_radius))
        throw std::invalid_argument("SimConfig: need 0 <= obstacle_radius < ball_radius/2");
    if (velocity_form_mode(config.mode)) {
        const double eta = resolved_eta(config);
        if (!(eta > 0.0))
            throw std::invalid_argument("SimConfig: need penalization_eta > 0");
        if (eta > config.dt * (1.0 + 1e-12))
            throw std::invalid_argument("SimConfig: need penalization_eta <= dt");
    }
}

SimState make_initial_state(const SimConfig& config, const ScalarField& omega0) {
    validate(config);
    if (velocity_form_mode(config.mode))
        throw std::invalid_argument("make_initial_state: exterior modes take velocity data");
    require_same_layout(config.grid, omega0.grid, "make_initial_state");
    SimState s(config.grid);
    s.vorticity = omega0;
    s.mean_velocity = config.mean_velocity;
    s.velocity_form = false;
    return s;
}

SimState make_initial_state(const SimConfig& config, const VectorField2& u0) {
    validate(config);
    if (!velocity_form_mode(config.mode))
        throw std::invalid_argument("make_initial_state: plane modes take vorticity data");
    require_same_layout(config.grid, u0.grid(), "make_initial_state");
    SimState s(config.grid);
    s.velocity = u0;
    s.velocity_form = true;
    return s;
}

VectorField2 state_velocity(const SimState& state) {
    if (state.velocity_form) return state.velocity;
    VectorField2 v = biot_savart(state.vorticity);
    for (double& a : v.x.data) a += state.mean_velocity[0];
    for (double& a : v.y.data) a += state.mean_velocity[1];
    return v;
}

double cfl_limit(const SimState& state, const SimConfig& config) {
    const double speed = max_speed(state_velocity(state));
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * config.grid.dx() / speed;
}

VectorField2 apply_penalization(const VectorField2& u, double obstacle_radius, double dt,
                                double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("apply_penalization: need eta > 0");
    VectorField2 out = u;
    if (obstacle_radius <= 0.0) return out;
    const Grid& g = u.grid();
    const double factor = 1.0 / (1.0 + dt / eta);
    for (int iy = 0; iy < g.n_points; ++iy)
        for (int ix = 0; ix < g.n_points; ++ix)
            if (g.in_ball(ix, iy, obstacle_radius)) {
                out.x(ix, iy) *= factor;
                out.y(ix, iy) *= factor;
            }
    return out;
}

SimState step_plane(const SimState& state, const SimConfig& config, double dt, bool advect) {
    if (state.velocity_form)
        throw std::invalid_argument("step_plane: state is in velocity form");
    if (!(dt > 0.0)) throw std::invalid_argument("step_plane: need dt > 0");

    SimState out = state;
    SpectralField w = to_spectral(state.vorticity);
    const PlaneRhs rhs{state.mean_velocity};
    const double dx = config.grid.dx();

    if (!advect) {
        apply_heat(w, dt);
    } else {
        double remaining = dt;
        int substeps = 0;
        while (remaining > 1e-12 * dt) {
            if (++substeps > kMaxSubsteps)
                throw std::runtime_error("step_plane: CFL subdivision did not terminate");
            double speed = 0.0;
            const SpectralField n0 = rhs(w, &speed);
            const double limit =
                speed == 0.0 ? std::numeric_limits<double>::infinity() : 0.5 * dx / speed;
            double h = remaining;
            if (h > limit) {
                if (!config.adaptive_dt)
                    throw std::runtime_error("step_plane: CFL violation: dt=" +
                                             std::to_string(h) + " exceeds limit " +
                                             std::to_string(limit));
                h = limit;
                ++out.cfl_reductions;
            }
            w = if_rk3_substep(w, h, rhs, n0);
            remaining -= h;
        }
    }

    out.vorticity = to_physical(w);
    out.time = state.time + dt;
    out.step_count = state.step_count + 1;
    if (!out.vorticity.all_finite()) abort_non_finite("step_plane", out);
    return out;
}

SimState step_exterior(const SimState& state, const SimConfig& config, double dt, bool advect) {
    if (!state.velocity_form)
        throw std::invalid_argument("step_exterior: state is in vorticity form");
    if (!(dt > 0.0)) throw std::invalid_argument("step_exterior: need dt > 0");

    SimState out = state;
    SpectralVector2 u = to_spectral(state.velocity);
    const ExteriorRhs rhs;
    const double dx = config.grid.dx();
    const double eta = resolved_eta(config);
    const double rob = resolved_obstacle_radius(config);

    auto penalize_project = [&](SpectralVector2& us, double h) {
        VectorField2 up = apply_penalization(to_physical(us), rob, h, eta);
        us = to_spectral(up);
        leray_project(us);
    };

    if (!advect) {
        apply_heat(u, dt);
        penalize_project(u, dt);
    } else {
        double remaining = dt;
        int substeps = 0;
        while (remaining > 1e-12 * dt) {
            if (++substeps > kMaxSubsteps)
                throw std::runtime_error("step_exterior: CFL subdivision did not terminate");
            double speed = 0.0;
            const SpectralVector2 n0 = rhs(u, &speed);
            const double limit =
                speed == 0.0 ? std::numeric_limits<double>::infinity() : 0.5 * dx / speed;
            double h = remaining;
            if (h > limit) {
                if (!config.adaptive_dt)
                    throw std::runtime_error("step_exterior: CFL violation: dt=" +
                                             std::to_string(h) + " exceeds limit " +
                                             std::to_string(limit));
                h = limit;
                ++out.cfl_reductions;
            }
            u = if_rk3_substep(u, h, rhs, n0);
            penalize_project(u, h);
            remaining -= h;
        }
    }

    out.velocity = to_physical(u);
    out.time = state.time + dt;
    out.step_count = state.step_count + 1;
    if (!out.velocity.all_finite()) abort_non_finite("step_exterior", out);
    return out;
}

SimState advance(const SimState& state, const SimConfig& config) {
    switch (config.mode) {
        case SimMode::plane: return step_plane(state, config, config.dt, true);
        case SimMode::stokes_plane: return step_plane(state, config, config.dt, false);
        case SimMode::exterior: return step_exterior(state, config, config.dt, true);
        case SimMode::stokes_exterior: return step_exterior(state, config, config.dt, false);
    }
    throw std::logic_error("advance: unknown mode");
}

namespace {

struct RunSink {
    const SimConfig* config = nullptr;
    std::string dir;
    std::ofstream diag;

    explicit RunSink(const SimConfig& c, const std::string& output_dir) : config(&c) {
        if (output_dir.empty()) return;
        dir = output_dir;
        std::filesystem::create_directories(dir);
        diag.open(dir + "/diagnostics.csv");
        if (!diag) throw std::runtime_error("run: cannot open " + dir + "/diagnostics.csv");
        diag << "step,t,energy,enstrophy,max_u,obstacle_leak\n" << std::flush;
    }

    void record(const SimState& s) {
        if (dir.empty()) return;
        const Grid& g = config->grid;
        const VectorField2 v = state_velocity(s);
        const ScalarField w = s.velocity_form ? curl(s.velocity) : s.vorticity;
        const double cell = g.dx() * g.dx();
        double energy = 0.0, enstrophy = 0.0, vmax = 0.0, leak = 0.0;
        const double rob = resolved_obstacle_radius(*config);
        for (int iy = 0; iy < g.n_points; ++iy)
            for (int ix = 0; ix < g.n_points; ++ix) {
                const double speed = std::hypot(v.x(ix, iy), v.y(ix, iy));
                energy += speed * speed;
                enstrophy += w(ix, iy) * w(ix, iy);
                vmax = std::max(vmax, speed);
                if (s.velocity_form && rob > 0.0 && g.in_ball(ix, iy, rob))
                    leak = std::max(leak, speed);
            }
        energy *= cell;
        enstrophy *= cell;
        diag << format_row(s.step_count, s.time, energy, enstrophy, vmax, leak) << "\n"
             << std::flush;

        Snapshot snap;
        snap.time = s.time;
        snap.grid = g;
        if (s.velocity_form) {
            snap.components = {v.x, v.y};
        } else {
            // the velocity components ride along so a replay can recover the
            // box mean, which the vorticity alone does not determine
            snap.components = {s.vorticity, v.x, v.y};
        }
        char name[64];
        std::snprintf(name, sizeof(name), "/snap_%08ld.nsf2", s.step_count);
        write_snapshot(dir + name, snap);
    }
};

Trajectory run_loop(const SimConfig& config, SimState state, bool advect,
                    const std::string& output_dir) {
    Trajectory traj(config);
    RunSink sink(config, output_dir);
    traj.snapshots.push_back(state);
    sink.record(state);

    const long n_steps = config.t_end <= 0.0
                             ? 0
                             : static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
    for (long i = 1; i <= n_steps; ++i) {
        const double target = std::min(config.t_end, i * config.dt);
        const double h = target - state.time;
        if (!(h > 0.0)) continue;
        const bool vel_form = velocity_form_mode(config.mode);
        state = vel_form ? step_exterior(state, config, h, advect)
                         : step_plane(state, config, h, advect);
        state.time = target; // keep snapshot times on the exact step grid
        if (i % config.snapshot_every == 0 || i == n_steps) {
            traj.snapshots.push_back(state);
            sink.record(state);
        }
    }
    return traj;
}

} // namespace

Trajectory stokes_evolve(const VectorField2& v0, const SimConfig& config) {
    validate(config);
    require_same_layout(config.grid, v0.grid(), "stokes_evolve");
    if (velocity_form_mode(config.mode)) {
        SimState s(config.grid);
        s.velocity = v0;
        s.velocity_form = true;
        return run_loop(config, s, false, "");
    }
    SimState s(config.grid);
    s.vorticity = curl(v0);
    s.mean_velocity = box_mean(v0);
    s.velocity_form = false;
    return run_loop(config, s, false, "");
}

Trajectory run(const SimConfig& config, const ScalarField& omega0,
               const std::string& output_dir) {
    SimState s = make_initial_state(config, omega0);
    const bool advect = config.mode == SimMode::plane;
    return run_loop(config, s, advect, output_dir);
}

Trajectory run(const SimConfig& config, const VectorField2& u0, const std::string& output_dir) {
    SimState s = make_initial_state(config, u0);
    const bool advect = config.mode == SimMode::exterior;
    return run_loop(config, s, advect, output_dir);
}

} // namespace oseen
