#pragma once

#include <complex>
#include <vector>

namespace hwlab::fft {

// In-place complex DFTs backed by FFTW. Plans are cached per length behind a mutex;
// execution uses the new-array interface, so concurrent calls on distinct buffers are safe.
// forward: unnormalized, exponent -i. inverse: exponent +i, divides by n.
void forward(std::vector<std::complex<double>>& data);
void inverse(std::vector<std::complex<double>>& data);

}  // namespace hwlab::fft
