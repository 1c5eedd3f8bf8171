#pragma once

#include <complex>
#include <vector>

namespace omtk {

// In-order complex DFT, FFTW backend. forward: X[k] = sum_n x[n] e^{-2pi i k n / N}.
// Plan cache is guarded internally; safe for concurrent calls.
void fft_forward(std::vector<std::complex<double>>& data);
void fft_inverse(std::vector<std::complex<double>>& data);  // includes the 1/N factor

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x);

// Signed bin frequency in cycles per sample, bin k of an N-point DFT.
double fft_bin_cycles(std::size_t k, std::size_t n);

}  // namespace omtk
