#include "oseen/comparable.hpp"

#include <cmath>
#include <stdexcept>

#include "oseen/lorentz.hpp"
#include "oseen/operators.hpp"

namespace oseen {

namespace {

// Relative level below which a far-field mismatch counts as numerically zero.
// Sized to sit above the truncation ringing at N >= 512 while rejecting any
// genuine far-field perturbation by orders of magnitude.
constexpr double kSupportTol = 5e-3;

double ball_mean(const ScalarField& f) {
    const Grid& g = f.grid;
    double sum = 0.0;
    long count = 0;
    for (int iy = 0; iy < g.n_points; ++iy) {
        for (int ix = 0; ix < g.n_points; ++ix) {
            if (g.in_ball(ix, iy, g.ball_radius)) {
                sum += f.data[g.idx(ix, iy)];
                ++count;
            }
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

StreamMatrix stream_matrix(const VectorField2& v) {
    const Grid& g = v.grid();
    const double vmax = v.max_abs();
    if (vmax > 0.0) {
        const ScalarField dv = divergence(v);
        if (dv.max_abs() >= 1e-8 * vmax) {
            throw std::invalid_argument(
                "stream_matrix: input is not divergence-free (||div v||_inf >= 1e-8 ||v||_inf)");
        }
    }

    // Delta psi = d2 v1 - d1 v2 = -curl v; curl is a spectral derivative, so the
    // right-hand side is mean-free and the inversion is well posed.
    ScalarField rhs = curl(v);
    for (double& x : rhs.data) x = -x;
    StreamMatrix out;
    out.grid = g;
    out.psi12 = inverse_laplacian(rhs);

    const double shift = ball_mean(out.psi12);
    for (double& x : out.psi12.data) x -= shift;
    out.ball_mean_removed = true;
    return out;
}

VectorField2 truncate_field(const VectorField2& v, const CutoffProfile& f) {
    require_same_layout(v.grid(), f.grid, "truncate_field");
    StreamMatrix sm = stream_matrix(v);
    ScalarField g = sm.psi12;
    for (size_t i = 0; i < g.data.size(); ++i) g.data[i] *= f.values.data[i];

    VectorField2 out(v.grid());
    out.x = derivative(g, 2);
    out.y = derivative(g, 1);
    for (double& x : out.y.data) x = -x;
    return out;
}

ComparabilityReport comparability_report(const VectorField2& u0, const VectorField2& v0,
                                         double q) {
    require_same_layout(u0.grid(), v0.grid(), "comparability_report");
    if (!(q > 1.0 && q <= 2.0)) {
        throw std::invalid_argument("comparability_report: q must lie in (1, 2]");
    }
    const Grid& g = u0.grid();
    const double mask_radius = g.ball_radius / 4.0;

    VectorField2 diff(g);
    double outside_max = 0.0;
    for (int iy = 0; iy < g.n_points; ++iy) {
        for (int ix = 0; ix < g.n_points; ++ix) {
            const size_t i = g.idx(ix, iy);
            const double dx = u0.x.data[i] - v0.x.data[i];
            const double dy = u0.y.data[i] - v0.y.data[i];
            const double r = g.radius(ix, iy);
            if (r > mask_radius) {
                diff.x.data[i] = dx;
                diff.y.data[i] = dy;
            }
            if (r > g.ball_radius) {
                outside_max = std::max(outside_max, std::hypot(dx, dy));
            }
        }
    }

    ComparabilityReport rep;
    rep.norm = lp_norm(diff, q);
    const double scale = std::max(u0.max_abs(), v0.max_abs());
    rep.compactly_supported_difference = outside_max <= kSupportTol * scale;
    return rep;
}

SplitResult split_by_height(const VectorField2& u0, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("split_by_height: threshold must be positive");
    const Grid& g = u0.grid();

    VectorField2 large(g);
    VectorField2 small(g);
    for (size_t i = 0; i < u0.x.data.size(); ++i) {
        const double ux = u0.x.data[i];
        const double uy = u0.y.data[i];
        if (std::hypot(ux, uy) > delta) {
            large.x.data[i] = ux;
            large.y.data[i] = uy;
        } else {
            small.x.data[i] = ux;
            small.y.data[i] = uy;
        }
    }

    SplitResult out;
    out.threshold = delta;
    out.large_part = leray_project(large);
    out.small_part = leray_project(small);
    out.weak_norm_of_small = weak_lp_quasinorm(out.small_part, 2.0);
    return out;
}

}  // namespace oseen
