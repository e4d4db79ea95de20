#pragma once

#include <complex>
#include <vector>

namespace dloc {

using cplx = std::complex<double>;

// FFTW wrappers on n x n row-major arrays. Plans are built once per size with
// FFTW_ESTIMATE (deterministic) and shared; execution is thread-safe.
// Forward uses e^{-2 pi i k x}; nothing is normalized.
void fft2d_forward(cplx* data, int n);
void fft2d_backward(cplx* data, int n);

// real n x n -> n x (n/2 + 1) half spectrum
std::vector<cplx> rfft2d(const std::vector<double>& in, int n);
// half spectrum -> real n x n
std::vector<double> irfft2d(const std::vector<cplx>& half, int n);

// |F f| on the full n x n grid for real f, expanded from the half spectrum.
std::vector<double> abs_spectrum(const std::vector<double>& f, int n);

// Circular convolution (1/n^2) sum_q a(q) b(k - q) of two real n x n arrays.
std::vector<double> circular_convolve(const std::vector<double>& a, const std::vector<cplx>& b_half, int n);
// Same with a already transformed, so one rfft2d of a can serve many kernels.
std::vector<double> circular_convolve_half(const std::vector<cplx>& a_half, const std::vector<cplx>& b_half, int n);

}  // namespace dloc
