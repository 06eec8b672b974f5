#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "oseen/grid.hpp"

namespace oseen {

/// Real scalar samples on the grid, row-major (iy slow).
struct ScalarField {
    Grid grid;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), data(static_cast<size_t>(g.size()), 0.0) {}

    double& operator()(int ix, int iy) { return data[static_cast<size_t>(grid.idx(ix, iy))]; }
    double operator()(int ix, int iy) const { return data[static_cast<size_t>(grid.idx(ix, iy))]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Two-component velocity-like field; components share one grid.
struct VectorField2 {
    ScalarField x, y;

    VectorField2() = default;
    explicit VectorField2(const Grid& g) : x(g), y(g) {}

    const Grid& grid() const { return x.grid; }
    double max_abs() const { return std::max(x.max_abs(), y.max_abs()); }
    bool all_finite() const { return x.all_finite() && y.all_finite(); }
};

/// Complex Fourier coefficients, same storage layout as the physical grid:
/// entry (mx, my) holds the mode with wavenumber (k(mx), k(my)).
/// Forward transforms are unnormalized sums; the inverse divides by N^2.
/// Coefficients are anchored at the array origin, i.e. node (0, 0) at the
/// box corner (-L, -L): f(x) = (1/N^2) sum_m c_m exp(i k_m . (x + L)).
/// A feature centered at x = 0 therefore carries the extra phase
/// (-1)^{mx + my} relative to its textbook center-anchored coefficients.
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> data;

    SpectralField() = default;
    explicit SpectralField(const Grid& g)
        : grid(g), data(static_cast<size_t>(g.size()), std::complex<double>(0.0, 0.0)) {}

    std::complex<double>& operator()(int mx, int my) {
        return data[static_cast<size_t>(grid.idx(mx, my))];
    }
    std::complex<double> operator()(int mx, int my) const {
        return data[static_cast<size_t>(grid.idx(mx, my))];
    }

    /// Largest Hermitian-symmetry defect |c(k) - conj(c(-k))|; zero for
    /// transforms of real data up to rounding.
    double hermitian_defect() const {
        const int n = grid.n_points;
        double worst = 0.0;
        for (int my = 0; my < n; ++my)
            for (int mx = 0; mx < n; ++mx) {
                const int jx = (n - mx) % n, jy = (n - my) % n;
                const auto d = (*this)(mx, my) - std::conj((*this)(jx, jy));
                worst = std::max(worst, std::abs(d));
            }
        return worst;
    }
};

struct SpectralVector2 {
    SpectralField x, y;
    SpectralVector2() = default;
    explicit SpectralVector2(const Grid& g) : x(g), y(g) {}
    const Grid& grid() const { return x.grid; }
};

} // namespace oseen
