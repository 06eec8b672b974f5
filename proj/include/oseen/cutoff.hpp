#pragma once

#include "oseen/field.hpp"
#include "oseen/grid.hpp"

namespace oseen {

/// Radial cutoff built from the C-infinity smoothstep
///   s(tau) = sigma(tau) / (sigma(tau) + sigma(1 - tau)),   sigma(tau) = exp(-1/tau),
/// rescaled so the transition spans radii [R/2, 2R/3], R = grid ball radius.
/// f is exactly 0 for |x| <= R/2 and exactly 1 for |x| >= 2R/3; the sigma
/// construction is symmetric about the band midpoint, where f = 1/2.
///
/// Radial derivatives up to third order are available in closed form and vanish
/// identically outside the open transition band. Downstream assemblies rely on
/// those exact zeros for compact support, so derivatives of f are never taken
/// spectrally or by differencing the samples.
struct CutoffProfile {
    Grid grid;
    ScalarField values;    // f at the nodes
    double r_inner = 0.0;  // R/2
    double r_outer = 0.0;  // 2R/3

    double value_at(double r) const;
    double d1_at(double r) const;  // df/dr
    double d2_at(double r) const;
    double d3_at(double r) const;
};

/// Samples the profile on the grid. The transition band must span at least five
/// cells (dx <= (r_outer - r_inner)/5); a coarser grid cannot represent the
/// transition and construction fails.
CutoffProfile make_cutoff(const Grid& grid);

}  // namespace oseen
