#include "oseen/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace oseen {

namespace {

using cplx = std::complex<double>;

bool is_nyquist(const Grid& g, int m) { return g.mode(m) == -g.n_points / 2; }

} // namespace

SpectralField derivative(const SpectralField& c, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("derivative: axis must be 1 or 2");
    const Grid& g = c.grid;
    const int n = g.n_points;
    SpectralField out(g);
    for (int my = 0; my < n; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < n; ++mx) {
            const int m = axis == 1 ? mx : my;
            if (is_nyquist(g, m)) continue;
            const double k = axis == 1 ? g.wavenumber(mx) : ky;
            out(mx, my) = cplx(0.0, k) * c(mx, my);
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& c) {
    const Grid& g = c.grid;
    const int n = g.n_points;
    SpectralField out(g);
    for (int my = 0; my < n; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < n; ++mx) {
            const double kx = g.wavenumber(mx);
            out(mx, my) = -(kx * kx + ky * ky) * c(mx, my);
        }
    }
    return out;
}

SpectralField inverse_laplacian(const SpectralField& c) {
    const Grid& g = c.grid;
    const int n = g.n_points;
    const double npts = static_cast<double>(g.size());
    double sumsq = 0.0;
    for (const auto& z : c.data) sumsq += std::norm(z);
    const double rms = std::sqrt(sumsq) / npts;
    const double mean = std::abs(c(0, 0)) / npts;
    if (mean > 1e-10 * rms && mean > 1e-300)
        throw std::invalid_argument(
            "inverse_laplacian: zero mode (mean) must vanish before inversion");
    SpectralField out(g);
    for (int my = 0; my < n; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < n; ++mx) {
            if (mx == 0 && my == 0) continue;
            const double kx = g.wavenumber(mx);
            out(mx, my) = c(mx, my) / (-(kx * kx + ky * ky));
        }
    }
    return out;
}

void dealias(SpectralField& c) {
    const Grid& g = c.grid;
    const int n = g.n_points;
    const int keep = n / 3;
    for (int my = 0; my < n; ++my) {
        const bool kill_y = std::abs(g.mode(my)) > keep;
        for (int mx = 0; mx < n; ++mx)
            if (kill_y || std::abs(g.mode(mx)) > keep) c(mx, my) = cplx(0.0, 0.0);
    }
}

SpectralField curl(const SpectralVector2& v) {
    SpectralField out = derivative(v.y, 1);
    const SpectralField dxy = derivative(v.x, 2);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= dxy.data[i];
    return out;
}

SpectralField divergence(const SpectralVector2& v) {
    SpectralField out = derivative(v.x, 1);
    const SpectralField dyy = derivative(v.y, 2);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += dyy.data[i];
    return out;
}

void leray_project(SpectralVector2& v) {
    const Grid& g = v.grid();
    const int n = g.n_points;
    for (int my = 0; my < n; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < n; ++mx) {
            if (mx == 0 && my == 0) continue;
            // The Nyquist lines carry both +-N/2 at once, so the projector
            // direction is ill-defined there; zero them, matching the
            // derivative convention. Only fields with grid-scale content are
            // affected, and this keeps the projector idempotent and real.
            if (mx == n / 2 || my == n / 2) {
                v.x(mx, my) = 0.0;
                v.y(mx, my) = 0.0;
                continue;
            }
            const double kx = g.wavenumber(mx);
            const double k2 = kx * kx + ky * ky;
            const cplx kdotv = kx * v.x(mx, my) + ky * v.y(mx, my);
            v.x(mx, my) -= kx * kdotv / k2;
            v.y(mx, my) -= ky * kdotv / k2;
        }
    }
}

ScalarField derivative(const ScalarField& f, int axis) {
    return to_physical(derivative(to_spectral(f), axis));
}

ScalarField laplacian(const ScalarField& f) { return to_physical(laplacian(to_spectral(f))); }

ScalarField inverse_laplacian(const ScalarField& f) {
    return to_physical(inverse_laplacian(to_spectral(f)));
}

ScalarField curl(const VectorField2& v) { return to_physical(curl(to_spectral(v))); }

ScalarField divergence(const VectorField2& v) { return to_physical(divergence(to_spectral(v))); }

VectorField2 leray_project(const VectorField2& v) {
    SpectralVector2 c = to_spectral(v);
    leray_project(c);
    return to_physical(c);
}

SpectralVector2 biot_savart(const SpectralField& w) {
    const Grid& g = w.grid;
    const int n = g.n_points;
    SpectralVector2 v(g);
    for (int my = 0; my < n; ++my) {
        const double ky = g.wavenumber(my);
        const bool ny_y = is_nyquist(g, my);
        for (int mx = 0; mx < n; ++mx) {
            if (mx == 0 && my == 0) continue; // mean removed
            if (ny_y || is_nyquist(g, mx)) continue;
            const double kx = g.wavenumber(mx);
            const double k2 = kx * kx + ky * ky;
            const cplx phi = w(mx, my) / (-k2);
            v.x(mx, my) = cplx(0.0, -ky) * phi;
            v.y(mx, my) = cplx(0.0, kx) * phi;
        }
    }
    return v;
}

VectorField2 biot_savart(const ScalarField& w) { return to_physical(biot_savart(to_spectral(w))); }

VectorField2 nonlinear_term(const VectorField2& v) {
    SpectralVector2 c = to_spectral(v);
    dealias(c.x);
    dealias(c.y);
    const VectorField2 u = to_physical(c);
    const ScalarField d1u1 = to_physical(derivative(c.x, 1));
    const ScalarField d2u1 = to_physical(derivative(c.x, 2));
    const ScalarField d1u2 = to_physical(derivative(c.y, 1));
    const ScalarField d2u2 = to_physical(derivative(c.y, 2));
    VectorField2 adv(v.grid());
    for (size_t i = 0; i < adv.x.data.size(); ++i) {
        adv.x.data[i] = u.x.data[i] * d1u1.data[i] + u.y.data[i] * d2u1.data[i];
        adv.y.data[i] = u.x.data[i] * d1u2.data[i] + u.y.data[i] * d2u2.data[i];
    }
    SpectralVector2 out = to_spectral(adv);
    dealias(out.x);
    dealias(out.y);
    return to_physical(out);
}

ScalarField pressure_from_velocity(const VectorField2& v) {
    SpectralVector2 c = to_spectral(v);
    dealias(c.x);
    dealias(c.y);
    const VectorField2 u = to_physical(c);
    const Grid& g = v.grid();
    ScalarField t11(g), t12(g), t22(g);
    for (size_t i = 0; i < t11.data.size(); ++i) {
        t11.data[i] = u.x.data[i] * u.x.data[i];
        t12.data[i] = u.x.data[i] * u.y.data[i];
        t22.data[i] = u.y.data[i] * u.y.data[i];
    }
    SpectralField c11 = to_spectral(t11);
    SpectralField c12 = to_spectral(t12);
    SpectralField c22 = to_spectral(t22);
    const int n = g.n_points;
    SpectralField p(g);
    for (int my = 0; my < n; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < n; ++mx) {
            if (mx == 0 && my == 0) continue; // mean-zero by construction
            const double kx = g.wavenumber(mx);
            const double k2 = kx * kx + ky * ky;
            // p_hat = -(k_i k_j / |k|^2) T_ij
            p(mx, my) = -(kx * kx * c11(mx, my) + 2.0 * kx * ky * c12(mx, my) +
                          ky * ky * c22(mx, my)) /
                        k2;
        }
    }
    dealias(p);
    return to_physical(p);
}

} // namespace oseen
