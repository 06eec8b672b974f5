#include "oseen/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace oseen {

namespace {
// FFTW's planner is not thread-safe; execution on private buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct SpectralTransform::Impl {
    fftw_complex* buf_a = nullptr;
    fftw_complex* buf_b = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

SpectralTransform::SpectralTransform(int n) : n_(n), impl_(new Impl) {
    if (n < 2) throw std::invalid_argument("transform: grid size too small");
    const size_t count = static_cast<size_t>(n) * static_cast<size_t>(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->buf_a = fftw_alloc_complex(count);
    impl_->buf_b = fftw_alloc_complex(count);
    if (!impl_->buf_a || !impl_->buf_b) throw std::bad_alloc();
    // FFTW_ESTIMATE keeps planning deterministic and leaves the buffers intact.
    impl_->fwd = fftw_plan_dft_2d(n, n, impl_->buf_a, impl_->buf_b, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_2d(n, n, impl_->buf_a, impl_->buf_b, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("transform: fftw plan failed");
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->buf_a) fftw_free(impl_->buf_a);
    if (impl_->buf_b) fftw_free(impl_->buf_b);
}

void SpectralTransform::forward(const double* in, std::complex<double>* out) {
    const size_t count = static_cast<size_t>(n_) * static_cast<size_t>(n_);
    for (size_t i = 0; i < count; ++i) {
        impl_->buf_a[i][0] = in[i];
        impl_->buf_a[i][1] = 0.0;
    }
    fftw_execute(impl_->fwd);
    for (size_t i = 0; i < count; ++i)
        out[i] = std::complex<double>(impl_->buf_b[i][0], impl_->buf_b[i][1]);
}

void SpectralTransform::inverse(const std::complex<double>* in, double* out) {
    const size_t count = static_cast<size_t>(n_) * static_cast<size_t>(n_);
    for (size_t i = 0; i < count; ++i) {
        impl_->buf_a[i][0] = in[i].real();
        impl_->buf_a[i][1] = in[i].imag();
    }
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(count);
    for (size_t i = 0; i < count; ++i) out[i] = impl_->buf_b[i][0] * scale;
}

SpectralTransform& SpectralTransform::shared(int n) {
    thread_local std::unordered_map<int, std::unique_ptr<SpectralTransform>> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<SpectralTransform>(n)).first;
    return *it->second;
}

SpectralField to_spectral(const ScalarField& f) {
    if (!f.all_finite())
        throw std::invalid_argument("to_spectral: input contains non-finite samples");
    SpectralField out(f.grid);
    SpectralTransform::shared(f.grid.n_points).forward(f.data.data(), out.data.data());
    return out;
}

SpectralVector2 to_spectral(const VectorField2& v) {
    SpectralVector2 out;
    out.x = to_spectral(v.x);
    out.y = to_spectral(v.y);
    return out;
}

ScalarField to_physical(const SpectralField& c) {
    ScalarField out(c.grid);
    SpectralTransform::shared(c.grid.n_points).inverse(c.data.data(), out.data.data());
    return out;
}

VectorField2 to_physical(const SpectralVector2& c) {
    VectorField2 out;
    out.x = to_physical(c.x);
    out.y = to_physical(c.y);
    return out;
}

} // namespace oseen
