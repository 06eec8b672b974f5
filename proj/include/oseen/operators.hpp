#pragma once

#include "oseen/spectral.hpp"

namespace oseen {

// Spectral-space building blocks. Derivatives zero the unmatched Nyquist
// line of their axis so results of real inputs stay real. axis: 1 for x,
// 2 for y.
SpectralField derivative(const SpectralField& c, int axis);
SpectralField laplacian(const SpectralField& c);
/// Solves Laplace(u) = f for the mean-zero u; rejects input whose zero mode
/// is not negligible.
SpectralField inverse_laplacian(const SpectralField& c);
/// Zeroes every mode with |m| > N/3 in either axis (2/3 rule).
void dealias(SpectralField& c);
SpectralField curl(const SpectralVector2& v);
SpectralField divergence(const SpectralVector2& v);
/// Removes the gradient part mode-by-mode; the k = 0 mode passes through.
void leray_project(SpectralVector2& v);

// Physical-space entry points (transform, act, transform back).
ScalarField derivative(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
ScalarField inverse_laplacian(const ScalarField& f);
ScalarField curl(const VectorField2& v);
ScalarField divergence(const VectorField2& v);
VectorField2 leray_project(const VectorField2& v);

/// Velocity with curl(v) = w - mean(w) and div(v) = 0: v = grad^perp of the
/// stream function, grad^perp = (-d/dy, d/dx).
VectorField2 biot_savart(const ScalarField& w);
SpectralVector2 biot_savart(const SpectralField& w);

/// Dealiased advection term (v . grad) v.
VectorField2 nonlinear_term(const VectorField2& v);

/// Pressure of a divergence-free velocity: p = -sum_ij inv_laplacian
/// d_i d_j (v_i v_j), mean-zero, products dealiased.
ScalarField pressure_from_velocity(const VectorField2& v);

} // namespace oseen
