#include "oseen/lamb_oseen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oseen/spectral.hpp"

namespace oseen {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_positive_time(double t, const char* where) {
    if (!(t > 0.0))
        throw std::invalid_argument(std::string(where) + ": need t > 0, got " + std::to_string(t));
}

// (1 - exp(-s))/s, continuous at 0.
double core_profile(double s) {
    if (s < 1e-8) return 1.0 - 0.5 * s;
    return -std::expm1(-s) / s;
}

} // namespace

OseenParams::OseenParams(double alpha_, double core_time_) : alpha(alpha_), core_time(core_time_) {
    if (!std::isfinite(alpha))
        throw std::invalid_argument("OseenParams: alpha must be finite");
    if (!(core_time > 0.0) || !std::isfinite(core_time))
        throw std::invalid_argument("OseenParams: need core_time > 0");
}

double default_core_time(const Grid& g) { return 4.0 * g.dx() * g.dx(); }

VectorField2 lamb_oseen_velocity(const OseenParams& params, double t, const Grid& g) {
    require_positive_time(t, "lamb_oseen_velocity");
    VectorField2 v(g);
    const double scale = params.alpha / (8.0 * kPi * t);
    for (int iy = 0; iy < g.n_points; ++iy)
        for (int ix = 0; ix < g.n_points; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            const double s = (x * x + y * y) / (4.0 * t);
            const double a = scale * core_profile(s);
            v.x(ix, iy) = -a * y;
            v.y(ix, iy) = a * x;
        }
    return v;
}

ScalarField lamb_oseen_vorticity(const OseenParams& params, double t, const Grid& g) {
    require_positive_time(t, "lamb_oseen_vorticity");
    ScalarField w(g);
    const double scale = params.alpha / (4.0 * kPi * t);
    for (int iy = 0; iy < g.n_points; ++iy)
        for (int ix = 0; ix < g.n_points; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            w(ix, iy) = scale * std::exp(-(x * x + y * y) / (4.0 * t));
        }
    return w;
}

ScalarField lamb_oseen_vorticity_spectral(const OseenParams& params, double t, const Grid& g) {
    require_positive_time(t, "lamb_oseen_vorticity_spectral");
    SpectralField c(g);
    // Continuous transform of the Gaussian is alpha * exp(-|k|^2 t); the
    // 1/dx^2 converts it to the unnormalized coefficient convention and the
    // alternating sign recenters the peak from the box corner to the origin.
    const double amp = params.alpha / (g.dx() * g.dx());
    for (int my = 0; my < g.n_points; ++my)
        for (int mx = 0; mx < g.n_points; ++mx) {
            const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
            const double sign = ((mx + my) % 2 == 0) ? 1.0 : -1.0;
            c(mx, my) = amp * sign * std::exp(-(kx * kx + ky * ky) * t);
        }
    return to_physical(c);
}

VectorField2 initial_vortex(const OseenParams& params, const Grid& g) {
    return lamb_oseen_velocity(params, params.core_time, g);
}

DecaySeries self_similar_residual(const Trajectory& traj, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("self_similar_residual: need p >= 1");
    DecaySeries series;
    series.target_exponent = 0.0;
    for (const SimState& snap : traj.snapshots) {
        if (!(snap.time > 0.0)) continue;
        const VectorField2 v = state_velocity(snap);
        series.times.push_back(snap.time);
        series.values.push_back(std::pow(snap.time, 0.5 - 1.0 / p) * lp_norm(v, p));
    }
    return series;
}

} // namespace oseen
