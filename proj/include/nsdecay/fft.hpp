#pragma once

#include <complex>
#include <vector>

#include "nsdecay/grid.hpp"

namespace nsd {

using cplx = std::complex<double>;

// c2c transforms with cached FFTW plans (keyed by dims+direction).
// Forward is scaled by 1/prod(N) so spectra are trigonometric-interpolant
// coefficients; backward is unscaled.
void fft_forward(const GridSpec& g, const cplx* in, cplx* out);
void fft_backward(const GridSpec& g, const cplx* in, cplx* out);

std::vector<cplx> fft_forward_real(const GridSpec& g, const std::vector<double>& phys);
std::vector<double> fft_backward_real(const GridSpec& g, const std::vector<cplx>& spec);

}  // namespace nsd
