#pragma once

#include <complex>
#include <memory>

#include "oseen/field.hpp"

namespace oseen {

/// FFT pair for one grid size. Owns its plans and scratch buffers, so a
/// single instance must not be used from two threads at once; independent
/// instances are safe to run concurrently.
class SpectralTransform {
  public:
    explicit SpectralTransform(int n);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    int n() const { return n_; }

    /// Unnormalized forward DFT of real samples.
    void forward(const double* in, std::complex<double>* out);
    /// Inverse DFT divided by N^2; the imaginary residue is discarded.
    void inverse(const std::complex<double>* in, double* out);

    /// Per-thread shared instance for grids of size n.
    static SpectralTransform& shared(int n);

  private:
    struct Impl;
    int n_;
    std::unique_ptr<Impl> impl_;
};

/// Forward transform; rejects non-finite samples.
SpectralField to_spectral(const ScalarField& f);
SpectralVector2 to_spectral(const VectorField2& v);

/// Inverse transform (divides by N^2).
ScalarField to_physical(const SpectralField& c);
VectorField2 to_physical(const SpectralVector2& c);

} // namespace oseen
