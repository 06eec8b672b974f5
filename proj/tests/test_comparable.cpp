#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "oseen/comparable.hpp"
#include "oseen/cutoff.hpp"
#include "oseen/lorentz.hpp"
#include "oseen/operators.hpp"
#include "test_util.hpp"

using namespace oseen;
using namespace testutil;

namespace {

// Sampled closed-form velocities are not discretely divergence-free (box-edge
// wrap, nonzero box mean), so every closed-form input is mean-removed and
// Leray-projected once before entering discrete identities.
VectorField2 conditioned(VectorField2 v) {
    const Grid& g = v.grid();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < v.x.data.size(); ++i) {
        mx += v.x.data[i];
        my += v.y.data[i];
    }
    mx /= static_cast<double>(v.x.data.size());
    my /= static_cast<double>(v.y.data.size());
    for (size_t i = 0; i < v.x.data.size(); ++i) {
        v.x.data[i] -= mx;
        v.y.data[i] -= my;
    }
    (void)g;
    return leray_project(v);
}

VectorField2 lamb_oseen_sample(const Grid& g, double alpha, double t) {
    VectorField2 v(g);
    for (int iy = 0; iy < g.n_points; ++iy) {
        for (int ix = 0; ix < g.n_points; ++ix) {
            const double x = g.x(ix);
            const double y = g.y(iy);
            const double r2 = x * x + y * y;
            const size_t i = g.idx(ix, iy);
            if (r2 == 0.0) continue;
            const double s = r2 / (4.0 * t);
            const double gfac = -std::expm1(-s) / s;  // (1 - e^{-s}) / s
            const double c = alpha * gfac / (8.0 * M_PI * t);
            v.x.data[i] = -y * c;
            v.y.data[i] = x * c;
        }
    }
    return v;
}

double ball_mean_of(const ScalarField& f, double radius) {
    const Grid& g = f.grid;
    double sum = 0.0;
    long cnt = 0;
    for (int iy = 0; iy < g.n_points; ++iy)
        for (int ix = 0; ix < g.n_points; ++ix)
            if (g.radius(ix, iy) < radius) {
                sum += f.data[g.idx(ix, iy)];
                ++cnt;
            }
    return sum / static_cast<double>(cnt);
}

struct SupportLevels {
    double inside = 0.0;   // max |vbar| on B_{R/2}, relative to max |vbar|
    double outside = 0.0;  // max |vbar - v| outside B_R, relative to max |v| there
};

SupportLevels support_levels(const VectorField2& v, const VectorField2& vbar) {
    const Grid& g = v.grid();
    double in_max = 0.0, out_max = 0.0, out_ref = 0.0;
    for (int iy = 0; iy < g.n_points; ++iy) {
        for (int ix = 0; ix < g.n_points; ++ix) {
            const size_t i = g.idx(ix, iy);
            const double r = g.radius(ix, iy);
            const double m = std::hypot(vbar.x.data[i], vbar.y.data[i]);
            if (r < g.ball_radius / 2.0) in_max = std::max(in_max, m);
            if (r > g.ball_radius) {
                out_max = std::max(out_max, std::hypot(vbar.x.data[i] - v.x.data[i],
                                                       vbar.y.data[i] - v.y.data[i]));
                out_ref = std::max(out_ref, std::hypot(v.x.data[i], v.y.data[i]));
            }
        }
    }
    return {in_max / vbar.max_abs(), out_max / out_ref};
}

}  // namespace

TEST_CASE("cutoff geometry and regularity") {
    Grid g = make_grid(256, 8.0);  // R = 2, dx = 1/16, band R/6 = 1/3 spans > 5 cells
    CutoffProfile f = make_cutoff(g);

    SUBCASE("flat regions and range") {
        for (int iy = 0; iy < g.n_points; ++iy) {
            for (int ix = 0; ix < g.n_points; ++ix) {
                const double r = g.radius(ix, iy);
                const double val = f.values.data[g.idx(ix, iy)];
                CHECK(val >= 0.0);
                CHECK(val <= 1.0);
                if (r <= 0.4 * g.ball_radius) CHECK(val == 0.0);
                if (r >= 0.9 * g.ball_radius) CHECK(val == 1.0);
            }
        }
    }

    SUBCASE("midpoint value and symmetry") {
        const double mid = 0.5 * (f.r_inner + f.r_outer);
        CHECK(f.value_at(mid) == doctest::Approx(0.5).epsilon(1e-13));
        // sigma-symmetry: s(tau) + s(1 - tau) = 1
        const double w = f.r_outer - f.r_inner;
        for (double tau : {0.1, 0.23, 0.37, 0.44}) {
            const double sum = f.value_at(f.r_inner + tau * w) + f.value_at(f.r_outer - tau * w);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    SUBCASE("radial symmetry of the samples") {
        // f depends on the node only through its radius
        CHECK(f.values.data[g.idx(10, 20)] ==
              doctest::Approx(f.value_at(g.radius(10, 20))).epsilon(1e-15));
        CHECK(f.values.data[g.idx(20, 10)] == doctest::Approx(f.values.data[g.idx(10, 20)]));
    }

    SUBCASE("analytic derivatives against finite differences") {
        const double w = f.r_outer - f.r_inner;
        const double h = 1e-4 * w;
        for (double tau : {0.15, 0.3, 0.5, 0.7, 0.85}) {
            const double r = f.r_inner + tau * w;
            const double fd1 = (f.value_at(r + h) - f.value_at(r - h)) / (2.0 * h);
            const double fd2 = (f.value_at(r + h) - 2.0 * f.value_at(r) + f.value_at(r - h)) /
                               (h * h);
            const double fd3 = (f.d2_at(r + h) - f.d2_at(r - h)) / (2.0 * h);
            CHECK(f.d1_at(r) == doctest::Approx(fd1).epsilon(1e-6));
            CHECK(f.d2_at(r) == doctest::Approx(fd2).epsilon(1e-5));
            CHECK(f.d3_at(r) == doctest::Approx(fd3).epsilon(1e-6));
        }
    }

    SUBCASE("derivatives vanish identically outside the band") {
        for (double r : {0.0, 0.5 * f.r_inner, f.r_inner, f.r_outer, 1.5 * f.r_outer}) {
            CHECK(f.d1_at(r) == 0.0);
            CHECK(f.d2_at(r) == 0.0);
            CHECK(f.d3_at(r) == 0.0);
        }
    }

    SUBCASE("under-resolved band rejected") {
        CHECK_THROWS_AS((void)make_cutoff(make_grid(32, 8.0)), std::invalid_argument);
    }
}

TEST_CASE("stream matrix") {
    Grid g = make_grid(128, 8.0);
    std::mt19937_64 rng(42);

    SUBCASE("zero field") {
        StreamMatrix sm = stream_matrix(VectorField2(g));
        CHECK(sm.psi12.max_abs() == 0.0);
        CHECK(sm.ball_mean_removed);
    }

    SUBCASE("non-divergence-free input rejected") {
        VectorField2 bad(g);
        ScalarField s = random_smooth_scalar(g, rng);
        bad.x = s;  // generic gradient-bearing field
        bad.y = s;
        CHECK_THROWS_AS((void)stream_matrix(bad), std::invalid_argument);
    }

    SUBCASE("Poisson identity and ball mean on a Gaussian vortex") {
        ScalarField w(g);
        for (int iy = 0; iy < g.n_points; ++iy)
            for (int ix = 0; ix < g.n_points; ++ix) {
                const double r = g.radius(ix, iy);
                w.data[g.idx(ix, iy)] = std::exp(-r * r);
            }
        VectorField2 v = biot_savart(w);
        StreamMatrix sm = stream_matrix(v);

        // Delta psi = -(w - mean w): biot_savart drops the vorticity mean.
        double wmean = 0.0;
        for (double x : w.data) wmean += x;
        wmean /= static_cast<double>(w.data.size());
        ScalarField lhs = laplacian(sm.psi12);
        double err = 0.0;
        for (size_t i = 0; i < lhs.data.size(); ++i) {
            err = std::max(err, std::abs(lhs.data[i] + (w.data[i] - wmean)));
        }
        CHECK(err < 1e-8 * w.max_abs());

        CHECK(std::abs(ball_mean_of(sm.psi12, g.ball_radius)) < 1e-12 * sm.psi12.max_abs());

        // reconstruction: (div psi)_i = d_j psi_ij gives back v
        VectorField2 rec(g);
        rec.x = derivative(sm.psi12, 2);
        rec.y = derivative(sm.psi12, 1);
        for (double& x : rec.y.data) x = -x;
        CHECK(max_abs_diff(rec, v) < 1e-8 * v.max_abs());
    }

    SUBCASE("single divergence-free mode solves in closed form") {
        // v = (d2 g, -d1 g) for one cosine mode g: psi12 must equal g up to the
        // constant fixed by the B_R mean (the reconstruction identity forces the
        // + sign; see the orientation note in the decisions ledger).
        ScalarField gmode(g);
        const double kx = g.wavenumber(3), ky = g.wavenumber(2);
        for (int iy = 0; iy < g.n_points; ++iy)
            for (int ix = 0; ix < g.n_points; ++ix)
                gmode.data[g.idx(ix, iy)] = std::cos(kx * g.x(ix) + ky * g.y(iy) + 0.3);
        VectorField2 v(g);
        v.x = derivative(gmode, 2);
        v.y = derivative(gmode, 1);
        for (double& x : v.y.data) x = -x;

        StreamMatrix sm = stream_matrix(v);
        const double shift = ball_mean_of(gmode, g.ball_radius);
        double err = 0.0;
        for (size_t i = 0; i < gmode.data.size(); ++i) {
            err = std::max(err, std::abs(sm.psi12.data[i] - (gmode.data[i] - shift)));
        }
        CHECK(err < 1e-10);
    }

    SUBCASE("random corpus: reconstruction identity") {
        for (int trial = 0; trial < 5; ++trial) {
            VectorField2 v = random_divfree(g, rng);
            StreamMatrix sm = stream_matrix(v);
            VectorField2 rec(g);
            rec.x = derivative(sm.psi12, 2);
            rec.y = derivative(sm.psi12, 1);
            for (double& x : rec.y.data) x = -x;
            CHECK(max_abs_diff(rec, v) < 1e-8 * v.max_abs());
        }
    }
}

TEST_CASE("truncation") {
    SUBCASE("zero maps to zero") {
        Grid g = make_grid(256, 8.0);
        VectorField2 vb = truncate_field(VectorField2(g), make_cutoff(g));
        CHECK(vb.max_abs() == 0.0);
    }

    SUBCASE("divergence-free to machine precision and linear") {
        Grid g = make_grid(256, 8.0);
        CutoffProfile f = make_cutoff(g);
        std::mt19937_64 rng(7);
        VectorField2 v = random_divfree(g, rng);
        VectorField2 w = random_divfree(g, rng);

        VectorField2 vb = truncate_field(v, f);
        CHECK(divergence(vb).max_abs() < 1e-9 * vb.max_abs());

        // truncate(2v - 3w) = 2 truncate(v) - 3 truncate(w)
        VectorField2 combo(g);
        for (size_t i = 0; i < combo.x.data.size(); ++i) {
            combo.x.data[i] = 2.0 * v.x.data[i] - 3.0 * w.x.data[i];
            combo.y.data[i] = 2.0 * v.y.data[i] - 3.0 * w.y.data[i];
        }
        VectorField2 tc = truncate_field(combo, f);
        VectorField2 wb = truncate_field(w, f);
        double err = 0.0;
        for (size_t i = 0; i < tc.x.data.size(); ++i) {
            err = std::max(err, std::abs(tc.x.data[i] - 2.0 * vb.x.data[i] + 3.0 * wb.x.data[i]));
            err = std::max(err, std::abs(tc.y.data[i] - 2.0 * vb.y.data[i] + 3.0 * wb.y.data[i]));
        }
        CHECK(err < 1e-10 * tc.max_abs());
    }

    SUBCASE("support sandwich at the measured ringing level, N = 256") {
        // The curl-form truncation leaves a spectral-tail residue of the cutoff
        // in both support claims; the level decays like exp(-c sqrt(pi N / 48))
        // and was pinned by an independent rearrangement of the same assembly.
        Grid g = make_grid(256, 8.0);
        CutoffProfile f = make_cutoff(g);
        std::mt19937_64 rng(11);
        double worst_in = 0.0, worst_out = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            VectorField2 v = random_divfree(g, rng);
            SupportLevels lv = support_levels(v, truncate_field(v, f));
            worst_in = std::max(worst_in, lv.inside);
            worst_out = std::max(worst_out, lv.outside);
        }
        std::printf("truncation N=256 support: inside=%.3e outside=%.3e\n", worst_in, worst_out);
        CHECK(worst_in < 6e-2);
        CHECK(worst_out < 3e-2);
    }

    SUBCASE("support sandwich tightens with N") {
        std::mt19937_64 rng(13);
        Grid g5 = make_grid(512, 8.0);
        VectorField2 v = random_divfree(g5, rng);
        SupportLevels lv = support_levels(v, truncate_field(v, make_cutoff(g5)));
        std::printf("truncation N=512 support: inside=%.3e outside=%.3e\n", lv.inside, lv.outside);
        CHECK(lv.inside < 1e-2);
        CHECK(lv.outside < 4e-3);
    }

    SUBCASE("Lamb-Oseen velocity input") {
        Grid g = make_grid(512, 8.0);
        VectorField2 v = conditioned(lamb_oseen_sample(g, 1.0, 1.0));
        VectorField2 vb = truncate_field(v, make_cutoff(g));
        SupportLevels lv = support_levels(v, vb);
        std::printf("truncation N=512 oseen: inside=%.3e outside=%.3e\n", lv.inside, lv.outside);
        CHECK(lv.inside < 2e-2);
        CHECK(lv.outside < 8e-3);
        CHECK(divergence(vb).max_abs() < 1e-9 * vb.max_abs());
    }

    SUBCASE("corpus norm ratios bounded per p") {
        Grid g = make_grid(256, 8.0);
        CutoffProfile f = make_cutoff(g);
        std::mt19937_64 rng(17);
        for (double p : {2.0, 4.0, 8.0}) {
            double worst = 0.0;
            for (int trial = 0; trial < 50; ++trial) {
                VectorField2 v = random_divfree(g, rng);
                VectorField2 vb = truncate_field(v, f);
                worst = std::max(worst, lp_norm(vb, p) / lp_norm(v, p));
            }
            std::printf("truncation corpus constant p=%g: C=%.4f\n", p, worst);
            CHECK(worst < 3.0);
        }
    }
}

TEST_CASE("comparability report") {
    Grid g = make_grid(512, 10.0);  // R = 2.5
    std::mt19937_64 rng(23);

    SUBCASE("identical fields") {
        VectorField2 v = random_divfree(g, rng);
        ComparabilityReport rep = comparability_report(v, v, 1.5);
        CHECK(rep.norm == 0.0);
        CHECK(rep.compactly_supported_difference);
    }

    SUBCASE("truncation yields a compactly supported difference") {
        VectorField2 v = random_divfree(g, rng);
        VectorField2 u = truncate_field(v, make_cutoff(g));
        ComparabilityReport rep = comparability_report(u, v, 2.0);
        CHECK(rep.compactly_supported_difference);
        CHECK(rep.norm > 0.0);
    }

    SUBCASE("far-field tail flags as non-comparable and its norm grows with L") {
        double norms[2];
        int li = 0;
        for (double L : {10.0, 20.0}) {
            Grid gl = make_grid(512, L);
            VectorField2 v = random_divfree(gl, rng);
            VectorField2 u = v;
            for (int iy = 0; iy < gl.n_points; ++iy)
                for (int ix = 0; ix < gl.n_points; ++ix) {
                    const double r = gl.radius(ix, iy);
                    const double mag = 1.0 / std::max(r, 0.5);
                    const size_t i = gl.idx(ix, iy);
                    // azimuthal tail, |u - v| = |x|^{-1} capped near the origin
                    if (r > 0.0) {
                        u.x.data[i] += -gl.y(iy) / r * mag;
                        u.y.data[i] += gl.x(ix) / r * mag;
                    }
                }
            // q near 1 makes the L-divergence of the |x|^{-1} tail visible:
            // the norm grows like L^{0.9/1.1} between the two box sizes.
            ComparabilityReport rep = comparability_report(u, v, 1.1);
            CHECK_FALSE(rep.compactly_supported_difference);
            norms[li++] = rep.norm;
        }
        CHECK(norms[1] > 1.5 * norms[0]);
    }

    SUBCASE("input validation") {
        VectorField2 v(g);
        CHECK_THROWS_AS((void)comparability_report(v, v, 1.0), std::invalid_argument);
        CHECK_THROWS_AS((void)comparability_report(v, v, 2.5), std::invalid_argument);
        VectorField2 other(make_grid(256, 10.0));
        CHECK_THROWS(comparability_report(v, other, 1.5));
    }
}

TEST_CASE("height splitting") {
    Grid g = make_grid(128, 8.0);
    std::mt19937_64 rng(31);

    SUBCASE("threshold above the field puts everything in the small part") {
        VectorField2 v = random_divfree(g, rng);
        SplitResult sr = split_by_height(v, 10.0 * v.max_abs());
        CHECK(sr.large_part.max_abs() == 0.0);
        CHECK(max_abs_diff(sr.small_part, v) < 1e-10 * v.max_abs());
        CHECK(sr.weak_norm_of_small == doctest::Approx(weak_lp_quasinorm(v, 2.0)).epsilon(1e-10));
    }

    SUBCASE("parts sum back to a divergence-free input, both parts divergence-free") {
        VectorField2 v = random_divfree(g, rng);
        SplitResult sr = split_by_height(v, 0.5 * v.max_abs());
        CHECK(sr.large_part.max_abs() > 0.0);
        CHECK(sr.small_part.max_abs() > 0.0);
        double err = 0.0;
        for (size_t i = 0; i < v.x.data.size(); ++i) {
            err = std::max(err, std::abs(sr.large_part.x.data[i] + sr.small_part.x.data[i] -
                                         v.x.data[i]));
            err = std::max(err, std::abs(sr.large_part.y.data[i] + sr.small_part.y.data[i] -
                                         v.y.data[i]));
        }
        CHECK(err < 1e-9 * v.max_abs());
        CHECK(divergence(sr.large_part).max_abs() < 1e-10 * sr.large_part.max_abs());
        CHECK(divergence(sr.small_part).max_abs() < 1e-10 * sr.small_part.max_abs());
    }

    SUBCASE("capped swirl splits along the analytic level set") {
        // |u| = min(1/r, 2), azimuthal. With delta = 1 the raw large part is
        // exactly the r < 1 disk; after projection its energy must stay
        // concentrated there.
        Grid gs = make_grid(256, 8.0);
        VectorField2 u(gs);
        for (int iy = 0; iy < gs.n_points; ++iy)
            for (int ix = 0; ix < gs.n_points; ++ix) {
                const double r = gs.radius(ix, iy);
                const double mag = std::min(2.0, r > 0.0 ? 1.0 / r : 2.0);
                const size_t i = gs.idx(ix, iy);
                if (r > 0.0) {
                    u.x.data[i] = -gs.y(iy) / r * mag;
                    u.y.data[i] = gs.x(ix) / r * mag;
                }
            }
        SplitResult sr = split_by_height(u, 1.0);
        double inside2 = 0.0, outside2 = 0.0;
        for (int iy = 0; iy < gs.n_points; ++iy)
            for (int ix = 0; ix < gs.n_points; ++ix) {
                const size_t i = gs.idx(ix, iy);
                const double e = sr.large_part.x.data[i] * sr.large_part.x.data[i] +
                                 sr.large_part.y.data[i] * sr.large_part.y.data[i];
                if (gs.radius(ix, iy) < 1.0 + 2.0 * gs.dx()) {
                    inside2 += e;
                } else {
                    outside2 += e;
                }
            }
        std::printf("split level-set energy: inside=%.4e outside=%.4e\n", inside2, outside2);
        CHECK(outside2 < 0.05 * inside2);
        CHECK(sr.weak_norm_of_small > 0.0);
    }

    SUBCASE("nonpositive threshold rejected") {
        CHECK_THROWS_AS((void)split_by_height(VectorField2(g), 0.0), std::invalid_argument);
        CHECK_THROWS_AS((void)split_by_height(VectorField2(g), -1.0), std::invalid_argument);
    }
}
