#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace oseen {

// Uniform N x N grid on the periodic square [-L, L)^2 with a marked ball
// B_R used by truncation cutoffs and the obstacle mask. Node (ix, iy) sits
// at (-L + ix*dx, -L + iy*dx), dx = 2L/N. Fields are stored row-major with
// iy as the slow index. Wavenumbers are k = (pi/L) * m with the integer
// mode m folded into [-N/2, N/2).
struct Grid {
    int n_points = 0;
    double half_width = 0.0;
    double ball_radius = 0.0;

    Grid() = default;

    Grid(int n, double l, double r)
        : n_points(n), half_width(l), ball_radius(r) {
        if (n < 32 || n % 2 != 0)
            throw std::invalid_argument("grid: n_points must be even and >= 32, got " +
                                        std::to_string(n));
        if (!(l > 0.0))
            throw std::invalid_argument("grid: half_width must be positive");
        if (!(r > 0.0))
            throw std::invalid_argument("grid: ball_radius must be positive");
        // keep one ball diameter of clearance to the periodic images
        if (4.0 * r > l * (1.0 + 1e-12))
            throw std::invalid_argument("grid: need 4*ball_radius <= half_width");
    }

    int size() const { return n_points * n_points; }
    double dx() const { return 2.0 * half_width / n_points; }

    double x(int ix) const { return -half_width + ix * dx(); }
    double y(int iy) const { return -half_width + iy * dx(); }

    int idx(int ix, int iy) const { return iy * n_points + ix; }

    // signed integer mode for storage index m in [0, N)
    int mode(int m) const { return m <= n_points / 2 - 1 ? m : m - n_points; }
    double wavenumber(int m) const {
        return M_PI / half_width * static_cast<double>(mode(m));
    }

    double radius(int ix, int iy) const { return std::hypot(x(ix), y(iy)); }

    // node-center membership: the node belongs to B_r iff |x| < r
    bool in_ball(int ix, int iy, double r) const { return radius(ix, iy) < r; }

    bool same_layout(const Grid& o) const {
        return n_points == o.n_points && half_width == o.half_width;
    }
    bool operator==(const Grid& o) const {
        return same_layout(o) && ball_radius == o.ball_radius;
    }
};

inline void require_same_layout(const Grid& a, const Grid& b, const char* where) {
    if (!a.same_layout(b))
        throw std::invalid_argument(std::string(where) + ": grid layouts differ");
}

} // namespace oseen
