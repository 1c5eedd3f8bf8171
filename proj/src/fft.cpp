#include "omtk/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace omtk {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

void run(std::vector<std::complex<double>>& data, int sign) {
  const std::size_t n = data.size();
  if (n < 2) return;
  fftw_plan plan;
  {
    // FFTW planning is not thread safe; execution on our own buffer is.
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  if (sign == FFTW_BACKWARD) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= inv;
  }
}
}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) { run(data, FFTW_FORWARD); }
void fft_inverse(std::vector<std::complex<double>>& data) { run(data, FFTW_BACKWARD); }

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x) {
  auto y = x;
  fft_forward(y);
  return y;
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x) {
  auto y = x;
  fft_inverse(y);
  return y;
}

double fft_bin_cycles(std::size_t k, std::size_t n) {
  const auto kn = static_cast<long long>(k);
  const auto nn = static_cast<long long>(n);
  const long long signed_k = (kn <= nn / 2) ? kn : kn - nn;
  return static_cast<double>(signed_k) / static_cast<double>(nn);
}

}  // namespace omtk
