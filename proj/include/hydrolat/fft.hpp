#ifndef HYDROLAT_FFT_HPP
#define HYDROLAT_FFT_HPP

#include "hydrolat/grid.hpp"

namespace hydrolat {

// Complex DFT on a Box backed by FFTW. Sign convention follows the lattice
// Fourier transform used throughout:
//   forward  (z -> theta):  fhat(k) = sum_z f(z) e^{+i theta_k . z}
//   inverse  (theta -> z):  f(z)    = (1/|box|) sum_k fhat(k) e^{-i theta_k . z}
// Plans are created with FFTW_ESTIMATE so transforms are deterministic.
void fft_forward(const Box& box, std::vector<cplx>& data);
void fft_inverse(const Box& box, std::vector<cplx>& data);

}  // namespace hydrolat

#endif
