#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "oseen/lamb_oseen.hpp"
#include "oseen/lorentz.hpp"
#include "oseen/operators.hpp"
#include "oseen/solver.hpp"
#include "test_util.hpp"

using namespace oseen;
using doctest::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Vortex fields centered at (cx, cy); the library versions are origin-centered.
VectorField2 off_center_velocity(const Grid& g, double alpha, double t, double cx, double cy) {
    VectorField2 v(g);
    const double scale = alpha / (8.0 * kPi * t);
    for (int iy = 0; iy < g.n_points; ++iy)
        for (int ix = 0; ix < g.n_points; ++ix) {
            const double x = g.x(ix) - cx, y = g.y(iy) - cy;
            const double s = (x * x + y * y) / (4.0 * t);
            const double prof = s < 1e-8 ? 1.0 - 0.5 * s : -std::expm1(-s) / s;
            v.x(ix, iy) = -scale * prof * y;
            v.y(ix, iy) = scale * prof * x;
        }
    return v;
}

double box_integral(const ScalarField& f) {
    double s = 0.0;
    for (double a : f.data) s += a;
    return s * f.grid.dx() * f.grid.dx();
}

} // namespace

TEST_CASE("vortex point values and asymptotics") {
    Grid g(128, 8.0, 2.0);
    OseenParams pr(1.0, 1.0);

    SUBCASE("closed-form samples") {
        VectorField2 v = lamb_oseen_velocity(pr, 1.0, g);
        // node (2, 0): purely azimuthal, counterclockwise for alpha > 0
        const int ix = 80, iy = 64;
        REQUIRE(g.x(ix) == Approx(2.0).epsilon(1e-15));
        REQUIRE(g.y(iy) == Approx(0.0).epsilon(1e-15));
        CHECK(v.x(ix, iy) == 0.0);
        CHECK(v.y(ix, iy) == Approx(-std::expm1(-1.0) / (4.0 * kPi)).epsilon(1e-13));

        // origin: removable singularity
        CHECK(v.x(64, 64) == 0.0);
        CHECK(v.y(64, 64) == 0.0);

        ScalarField w = lamb_oseen_vorticity(pr, 1.0, g);
        CHECK(w(64, 64) == Approx(1.0 / (4.0 * kPi)).epsilon(1e-13));
    }

    SUBCASE("far-field tail") {
        // the relative gap to the 1/|x|^2 tail is exp(-|x|^2/4t)
        auto tail_gap = [&](double t, int ix) {
            VectorField2 v = lamb_oseen_velocity(pr, t, g);
            const double x = g.x(ix);
            const double tail = 1.0 / (2.0 * kPi * x); // y-component at (x, 0)
            return std::fabs(v.y(ix, 64) - tail) / std::fabs(tail);
        };
        CHECK(tail_gap(0.1, 80) < 1e-4);   // |x|^2 = 40t: gap e^-10 ~ 4.5e-5
        CHECK(tail_gap(0.1, 80) > 1e-6);   // and genuinely not smaller
        CHECK(tail_gap(0.1, 84) < 1e-6);   // |x|^2 = 62.5t: gap e^-15.6
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(lamb_oseen_velocity(pr, 0.0, g), std::invalid_argument);
        CHECK_THROWS_AS(lamb_oseen_velocity(pr, -1.0, g), std::invalid_argument);
        CHECK_THROWS_AS(lamb_oseen_vorticity(pr, 0.0, g), std::invalid_argument);
        CHECK_THROWS_AS(lamb_oseen_vorticity_spectral(pr, -0.5, g), std::invalid_argument);
        CHECK_THROWS_AS(OseenParams(1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(OseenParams(1.0, -2.0), std::invalid_argument);
        CHECK_THROWS_AS(OseenParams(std::nan(""), 1.0), std::invalid_argument);
    }
}

TEST_CASE("vortex mass and curl consistency") {
    Grid g(256, 8.0, 2.0);
    OseenParams pr(1.0, 1.0);

    SUBCASE("box mass") {
        ScalarField w = lamb_oseen_vorticity(pr, 1.0, g);
        // tail bound exp(-L^2/4t) = 1.13e-7; measured 3.1e-8
        CHECK(std::fabs(box_integral(w) - 1.0) < 1.2e-7);

        ScalarField wc = lamb_oseen_vorticity(OseenParams(0.1, 1.0), default_core_time(g), g);
        CHECK(box_integral(wc) == Approx(0.1).epsilon(1e-12));
    }

    SUBCASE("band-limited synthesis matches the sampled gaussian") {
        const double tc = default_core_time(g);
        OseenParams pm(0.1, tc);
        ScalarField a = lamb_oseen_vorticity(pm, tc, g);
        ScalarField b = lamb_oseen_vorticity_spectral(pm, tc, g);
        CHECK(testutil::max_abs_diff(a, b) < 1e-13 * a.max_abs());
        CHECK(box_integral(b) == Approx(0.1).epsilon(1e-12));
    }

    SUBCASE("curl of the velocity is the vorticity") {
        VectorField2 v = lamb_oseen_velocity(pr, 1.0, g);
        ScalarField w = lamb_oseen_vorticity(pr, 1.0, g);

        // seam-free check: 4th-order finite differences, interior only
        auto vx = [&](int ix, int iy) { return v.x((ix + 256) % 256, (iy + 256) % 256); };
        auto vy = [&](int ix, int iy) { return v.y((ix + 256) % 256, (iy + 256) % 256); };
        const double idx12 = 1.0 / (12.0 * g.dx());
        double fd_err = 0.0, fd_mass = 0.0;
        for (int iy = 0; iy < g.n_points; ++iy)
            for (int ix = 0; ix < g.n_points; ++ix) {
                if (g.radius(ix, iy) > 4.0) continue;
                const double d1v2 = (-vy(ix + 2, iy) + 8 * vy(ix + 1, iy) - 8 * vy(ix - 1, iy) +
                                     vy(ix - 2, iy)) *
                                    idx12;
                const double d2v1 = (-vx(ix, iy + 2) + 8 * vx(ix, iy + 1) - 8 * vx(ix, iy - 1) +
                                     vx(ix, iy - 2)) *
                                    idx12;
                fd_err = std::max(fd_err, std::fabs(d1v2 - d2v1 - w(ix, iy)));
                fd_mass += (d1v2 - d2v1) * g.dx() * g.dx();
            }
        CHECK(fd_err < 1e-6); // measured 5.1e-8

        // circulation inside r = L/2 carries the mass 1 - exp(-(L/2)^2/4t)
        CHECK(std::fabs(fd_mass - (1.0 - std::exp(-4.0))) < 2e-4); // measured 8.6e-5

        // The spectral curl sees the non-periodic 1/|x| tail: the wrap seam
        // carries an O(1/(pi L)) jump whose ringing dominates everywhere
        // outside the core. Pin the measured levels rather than pretend the
        // sampled field is periodic.
        ScalarField wc = curl(v);
        double inner_err = 0.0;
        for (int iy = 0; iy < g.n_points; ++iy)
            for (int ix = 0; ix < g.n_points; ++ix)
                if (g.radius(ix, iy) <= 4.0)
                    inner_err = std::max(inner_err, std::fabs(wc(ix, iy) - w(ix, iy)));
        std::printf("spectral curl vs vorticity, r<=L/2: %.3e\n", inner_err);
        CHECK(inner_err < 1e-2); // measured 4.4e-3
    }
}

TEST_CASE("vortex scaling and linearity") {
    SUBCASE("parabolic scaling") {
        // v(lambda^2 t) at lambda x = v(t) at x / lambda
        for (double lambda : {2.0, 1.7}) {
            Grid g1(96, 4.0, 1.0);
            Grid g2(96, 4.0 * lambda, 1.0 * lambda);
            OseenParams pr(0.7, 1.0);
            VectorField2 a = lamb_oseen_velocity(pr, 0.3, g1);
            VectorField2 b = lamb_oseen_velocity(pr, lambda * lambda * 0.3, g2);
            double worst = 0.0;
            for (size_t i = 0; i < a.x.data.size(); ++i) {
                worst = std::max(worst, std::fabs(lambda * b.x.data[i] - a.x.data[i]));
                worst = std::max(worst, std::fabs(lambda * b.y.data[i] - a.y.data[i]));
            }
            CHECK(worst < 1e-12 * a.max_abs());
        }
    }

    SUBCASE("linearity in alpha") {
        Grid g(64, 8.0, 2.0);
        VectorField2 a = lamb_oseen_velocity(OseenParams(2.5, 1.0), 0.4, g);
        VectorField2 b = lamb_oseen_velocity(OseenParams(1.0, 1.0), 0.4, g);
        for (double& x : b.x.data) x *= 2.5;
        for (double& x : b.y.data) x *= 2.5;
        CHECK(testutil::max_abs_diff(a, b) < 1e-13 * a.max_abs());
    }

    SUBCASE("initial vortex is the velocity at the core time") {
        Grid g(64, 8.0, 2.0);
        OseenParams pr(0.3, 0.05);
        CHECK(testutil::max_abs_diff(initial_vortex(pr, g),
                                     lamb_oseen_velocity(pr, 0.05, g)) == 0.0);
        CHECK(default_core_time(g) == Approx(4.0 * 0.25 * 0.25).epsilon(1e-15));
    }
}

TEST_CASE("initial vortex weak norm") {
    Grid g(512, 16.0, 4.0);
    // |v| = 1/(2 pi r) has weak-L2 quasinorm 1/(2 sqrt(pi)) ~ 0.28209
    const double target = 1.0 / (2.0 * std::sqrt(kPi));

    OseenParams pr(1.0, default_core_time(g));
    const double q1 = weak_lp_quasinorm(initial_vortex(pr, g), 2.0);
    std::printf("weak-L2 of the initial vortex: %.5f (target %.5f)\n", q1, target);
    CHECK(std::fabs(q1 - target) < 0.02 * target); // measured 0.8% off

    // only weakly sensitive to the core time below the box scale
    OseenParams pr2(1.0, default_core_time(g) / 4.0);
    const double q2 = weak_lp_quasinorm(initial_vortex(pr2, g), 2.0);
    CHECK(std::fabs(q2 - q1) < 0.04 * q1); // measured 2.8%

    // and homogeneous in alpha
    OseenParams pr3(-2.0, default_core_time(g));
    CHECK(weak_lp_quasinorm(initial_vortex(pr3, g), 2.0) == Approx(2.0 * q1).epsilon(1e-12));
}

TEST_CASE("self-similar residual") {
    Grid g(256, 8.0, 2.0);
    const double tc = default_core_time(g);

    auto theta_trajectory = [&](bool absolute_times) {
        SimConfig cfg(g, 0.1, 0.0);
        Trajectory traj(cfg);
        for (double tau = 10 * tc; tau <= 100 * tc * (1 + 1e-9); tau *= 1.25) {
            SimState s(g);
            s.velocity_form = true;
            s.velocity = lamb_oseen_velocity(OseenParams(0.1, tc), tc + tau, g);
            s.time = absolute_times ? tc + tau : tau;
            traj.snapshots.push_back(s);
        }
        return traj;
    };
    auto rel_spread = [](const DecaySeries& s) {
        double lo = 1e300, hi = 0.0;
        for (double y : s.values) {
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        return (hi - lo) / hi;
    };

    SUBCASE("closed-form vortex gives a constant series") {
        Trajectory abs_t = theta_trajectory(true);
        // p=8: tail fully inside the box, the identity is clean
        CHECK(rel_spread(self_similar_residual(abs_t, 8.0)) < 1e-2); // measured 3.3e-4
        // p=4: the box clips the |x|^-1 tail, drifting ~2.6% per decade
        const double s4 = rel_spread(self_similar_residual(abs_t, 4.0));
        std::printf("residual spread p=4 absolute times: %.4f\n", s4);
        CHECK(s4 < 4e-2);

        // measured from the core time instead: still flat within 2%
        CHECK(rel_spread(self_similar_residual(theta_trajectory(false), 4.0)) < 2e-2);
    }

    SUBCASE("zero trajectory gives the zero series") {
        SimConfig cfg(g, 0.1, 0.0);
        Trajectory traj(cfg);
        for (double t : {0.0, 0.5, 1.0}) {
            SimState s(g);
            s.velocity_form = true;
            s.time = t;
            traj.snapshots.push_back(s);
        }
        DecaySeries series = self_similar_residual(traj, 4.0);
        REQUIRE(series.values.size() == 2); // the t = 0 snapshot is skipped
        CHECK(series.values[0] == 0.0);
        CHECK(series.values[1] == 0.0);
    }

    SUBCASE("heat flow of a dipole decays") {
        Grid gd(256, 16.0, 4.0);
        SimConfig cfg(gd, 0.1, 0.0);
        Trajectory traj(cfg);
        for (double tau = 1.0; tau <= 12.0 + 1e-9; tau += 1.0) {
            SimState s(gd);
            s.velocity_form = true;
            VectorField2 a = off_center_velocity(gd, 1.0, 0.5 + tau, 0.75, 0.0);
            VectorField2 b = off_center_velocity(gd, -1.0, 0.5 + tau, -0.75, 0.0);
            for (size_t i = 0; i < a.x.data.size(); ++i) {
                s.velocity.x.data[i] = a.x.data[i] + b.x.data[i];
                s.velocity.y.data[i] = a.y.data[i] + b.y.data[i];
            }
            s.time = tau;
            traj.snapshots.push_back(s);
        }
        DecaySeries series = self_similar_residual(traj, 4.0);
        DecaySeries fit = fit_decay(series.times, series.values, -0.5);
        std::printf("dipole residual: exponent %.3f quality %.4f\n", fit.fitted_exponent,
                    fit.fit_quality);
        CHECK(series.values.back() < 0.45 * series.values.front()); // measured 0.39
        CHECK(fit.fitted_exponent < -0.25);
        CHECK(fit.fitted_exponent > -0.55); // measured -0.389
        CHECK(fit.fit_quality > 0.95);      // measured 0.992
    }

    SUBCASE("validation") {
        SimConfig cfg(g, 0.1, 0.0);
        Trajectory traj(cfg);
        CHECK_THROWS_AS(self_similar_residual(traj, 0.5), std::invalid_argument);
    }
}
