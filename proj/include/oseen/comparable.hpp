#pragma once

#include "oseen/cutoff.hpp"
#include "oseen/field.hpp"
#include "oseen/grid.hpp"

namespace oseen {

/// Single independent component of the 2x2 skew-symmetric stream matrix:
/// psi12 stored, psi21 = -psi12, zero diagonal. Row-wise divergence
/// (div psi)_i = d_j psi_ij = (d2 psi12, -d1 psi12) recovers the velocity up to
/// its box mean, so callers feed mean-zero fields (see the closed-form data
/// pipeline note in the tests).
struct StreamMatrix {
    Grid grid;
    ScalarField psi12;
    bool ball_mean_removed = false;
};

struct ComparabilityReport {
    /// || (u0 - v0) restricted to |x| > mask radius ||_q
    double norm = 0.0;
    /// max |u0 - v0| over |x| > R at the noise level (see kSupportTol)
    bool compactly_supported_difference = false;
};

struct SplitResult {
    VectorField2 large_part;  // nodes above the threshold, Leray projected
    VectorField2 small_part;  // remainder, Leray projected
    double threshold = 0.0;
    double weak_norm_of_small = 0.0;  // weak-L2 quasinorm of the projected small part
};

/// Solves Delta psi12 = d2 v1 - d1 v2 spectrally with zero box mean, then shifts
/// by a constant so the mean over the ball B_R vanishes.
/// Requires ||div v||_inf < 1e-8 * ||v||_inf.
StreamMatrix stream_matrix(const VectorField2& v);

/// vbar = div(f psi) in the curl form (d2(f psi12), -d1(f psi12)), so the output
/// is divergence-free to machine precision and truncation is exactly linear in v.
/// The support facts (zero on B_{R/2}, equal to v outside B_R) hold to the
/// spectral tail of the cutoff, which shrinks like exp(-c sqrt(pi N / 48)),
/// c ~ 1.3; the truncation tests pin the measured levels per N.
VectorField2 truncate_field(const VectorField2& v, const CutoffProfile& f);

/// Exterior L^q norm of u0 - v0 outside the obstacle disk (radius R/4, the
/// solver's default obstacle), plus a flag for whether the difference is
/// numerically zero outside B_R. q must lie in (1, 2].
ComparabilityReport comparability_report(const VectorField2& u0, const VectorField2& v0,
                                         double q);

/// Threshold split: nodes with |u0| > delta form the large part, the rest the
/// small part (parts sum to u0 exactly at that stage); each part is then Leray
/// projected to restore the divergence-free property. delta must be positive.
SplitResult split_by_height(const VectorField2& u0, double delta);

}  // namespace oseen
