#pragma once

#include <complex>
#include <vector>

namespace wobble::fft {

// In-place type-I DCT (FFTW REDFT00, unnormalized):
//   y_j = x_0 + (-1)^j x_{n-1} + 2 sum_{k=1}^{n-2} x_k cos(pi j k / (n-1)).
void dct1(std::vector<double>& x);

// In-place complex DFT, unnormalized, sign -1.
void dft_forward(std::vector<std::complex<double>>& x);

}  // namespace wobble::fft
