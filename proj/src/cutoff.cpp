#include "oseen/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace oseen {

namespace {

// tau this close to an endpoint is snapped to the flat value. sigma(1e-2) is
// e^{-100} ~ 3.7e-44, below roundoff of anything downstream, and the snap keeps
// the 1/tau powers in the derivative formulas finite.
constexpr double kTauEdge = 1e-2;

struct Jet {
    double s = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

// s(tau) and derivatives up to third order. sigma(tau) = e^{-1/tau} gives
//   sigma'   = sigma / tau^2
//   sigma''  = sigma (1/tau^4 - 2/tau^3)
//   sigma''' = sigma (1/tau^6 - 6/tau^5 + 6/tau^4)
// and s = a / (a + b) with a = sigma(tau), b = sigma(1 - tau) is differentiated
// by the quotient rule against D = a + b.
Jet smoothstep(double tau) {
    Jet out;
    if (tau >= 1.0 - kTauEdge) {
        out.s = 1.0;
        return out;
    }
    if (tau <= kTauEdge) return out;

    const double u = 1.0 / tau;
    const double w = 1.0 / (1.0 - tau);
    const double a = std::exp(-u);
    const double b = std::exp(-w);

    const double a1 = a * u * u;
    const double a2 = a * (u * u * u * u - 2.0 * u * u * u);
    const double a3 = a * (std::pow(u, 6) - 6.0 * std::pow(u, 5) + 6.0 * std::pow(u, 4));
    // b(tau) = sigma(1 - tau), so odd derivatives pick up a sign.
    const double b1 = -b * w * w;
    const double b2 = b * (w * w * w * w - 2.0 * w * w * w);
    const double b3 = -b * (std::pow(w, 6) - 6.0 * std::pow(w, 5) + 6.0 * std::pow(w, 4));

    const double D = a + b;
    const double D1 = a1 + b1;
    const double D2 = a2 + b2;
    const double D3 = a3 + b3;
    const double iD = 1.0 / D;
    const double iD2 = iD * iD;
    const double iD3 = iD2 * iD;
    const double iD4 = iD2 * iD2;

    out.s = a * iD;
    out.s1 = a1 * iD - a * D1 * iD2;
    out.s2 = a2 * iD - 2.0 * a1 * D1 * iD2 - a * D2 * iD2 + 2.0 * a * D1 * D1 * iD3;
    out.s3 = a3 * iD - 3.0 * a2 * D1 * iD2 - 3.0 * a1 * D2 * iD2 + 6.0 * a1 * D1 * D1 * iD3 -
             a * D3 * iD2 + 6.0 * a * D1 * D2 * iD3 - 6.0 * a * D1 * D1 * D1 * iD4;
    return out;
}

Jet jet_at(const CutoffProfile& f, double r) {
    const double w = f.r_outer - f.r_inner;
    Jet j = smoothstep((r - f.r_inner) / w);
    // chain rule for the radial rescaling tau = (r - r_inner) / w
    j.s1 /= w;
    j.s2 /= w * w;
    j.s3 /= w * w * w;
    return j;
}

}  // namespace

double CutoffProfile::value_at(double r) const { return jet_at(*this, r).s; }
double CutoffProfile::d1_at(double r) const { return jet_at(*this, r).s1; }
double CutoffProfile::d2_at(double r) const { return jet_at(*this, r).s2; }
double CutoffProfile::d3_at(double r) const { return jet_at(*this, r).s3; }

CutoffProfile make_cutoff(const Grid& grid) {
    CutoffProfile f;
    f.grid = grid;
    f.r_inner = grid.ball_radius / 2.0;
    f.r_outer = 2.0 * grid.ball_radius / 3.0;
    const double band = f.r_outer - f.r_inner;
    if (grid.dx() > band / 5.0) {
        throw std::invalid_argument(
            "make_cutoff: transition band [R/2, 2R/3] narrower than 5 cells; refine the grid");
    }
    f.values = ScalarField(grid);
    const int n = grid.n_points;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            f.values.data[grid.idx(ix, iy)] = f.value_at(grid.radius(ix, iy));
        }
    }
    return f;
}

}  // namespace oseen
