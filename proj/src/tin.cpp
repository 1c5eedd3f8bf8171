#include "omtk/tin.hpp"

#include <algorithm>
#include <cmath>

#include "omtk/fft.hpp"

namespace omtk {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

// 1 / (i(-omega - detuning) + kappa/2): the cavity line of the series terms.
std::complex<double> lorentz_kernel(const CavityMode& cav, double omega) {
  return 1.0 / (kI * (-omega - cav.detuning) + 0.5 * cav.kappa);
}

std::size_t padded_length(std::size_t n) {
  // x2 zero padding against circular-convolution wraparound
  std::size_t p = 1;
  while (p < 2 * n) p <<= 1;
  return p;
}
}  // namespace

void DetuningNoiseTrace::validate() const {
  if (samples.size() < 2) throw InvalidParams("detuning trace: need at least 2 samples");
  if (!(dt > 0.0)) throw InvalidParams("detuning trace: dt must be positive");
  for (double v : samples)
    if (!std::isfinite(v)) throw InvalidParams("detuning trace: samples must be finite");
}

double FieldResponse::bin_hz(std::size_t k) const {
  return fft_bin_cycles(k, padded_size) / dt;
}

std::vector<std::complex<double>> FieldResponse::time_domain() const {
  auto t = ifft(freq);
  t.resize(trace_size);
  return t;
}

FieldResponse linear_field_response(const DetuningNoiseTrace& trace, const CavityMode& cav,
                                    double mean_field) {
  trace.validate();
  const std::size_t n = trace.size();
  const std::size_t np = padded_length(n);
  std::vector<std::complex<double>> d(np, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = trace.samples[i];
  fft_forward(d);
  FieldResponse a1;
  a1.dt = trace.dt;
  a1.padded_size = np;
  a1.trace_size = n;
  a1.freq.resize(np);
  for (std::size_t k = 0; k < np; ++k) {
    const double w = tau * a1.bin_hz(k);
    a1.freq[k] = mean_field * kI * d[k] * lorentz_kernel(cav, w);
  }
  return a1;
}

namespace {

// One extra Liouville-Neumann iteration: a_{m+1}(omega) = i L(omega) FT[dDelta a_m].
FieldResponse series_step(const FieldResponse& prev, const DetuningNoiseTrace& trace,
                          const CavityMode& cav) {
  auto t = ifft(prev.freq);
  for (std::size_t i = 0; i < prev.padded_size; ++i) {
    const double dd = i < trace.size() ? trace.samples[i] : 0.0;
    t[i] *= dd;
  }
  fft_forward(t);
  FieldResponse nxt = prev;
  for (std::size_t k = 0; k < nxt.padded_size; ++k) {
    const double w = tau * nxt.bin_hz(k);
    nxt.freq[k] = kI * t[k] * lorentz_kernel(cav, w);
  }
  return nxt;
}

double band_occupancy_fraction(const DetuningNoiseTrace& trace) {
  auto d = fft(std::vector<std::complex<double>>(trace.samples.begin(), trace.samples.end()));
  const std::size_t n = d.size();
  double total = 0.0;
  std::size_t kmax = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double p = std::norm(d[k]);
    total += p;
    if (p > std::norm(d[kmax])) kmax = k;
  }
  if (total <= 0.0) return 0.0;
  // highest occupied bin at the 1e-6 power level
  double highest = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::norm(d[k]) > 1e-6 * total)
      highest = std::max(highest, std::abs(fft_bin_cycles(k, n)));
  }
  return 2.0 * highest;  // fraction of the +-Nyquist band
}

double rms(const std::vector<std::complex<double>>& v) {
  double s = 0.0;
  for (auto& x : v) s += std::norm(x);
  return std::sqrt(s / std::max<std::size_t>(v.size(), 1));
}

}  // namespace

FieldResponse quadratic_field_response(const DetuningNoiseTrace& trace, const CavityMode& cav,
                                       double mean_field) {
  return field_response_series(trace, cav, mean_field).a2;
}

QuadraticResponse field_response_series(const DetuningNoiseTrace& trace, const CavityMode& cav,
                                        double mean_field) {
  trace.validate();
  if (band_occupancy_fraction(trace) > 0.40)
    throw AliasWarning("quadratic response: input occupies > 40% of the band");
  QuadraticResponse r;
  r.a1 = linear_field_response(trace, cav, mean_field);
  r.a2 = series_step(r.a1, trace, cav);
  FieldResponse a3 = series_step(r.a2, trace, cav);
  const double n2 = rms(r.a2.freq);
  r.third_order_residual = n2 > 0.0 ? rms(a3.freq) / n2 : 0.0;
  return r;
}

FieldResponse photon_number_noise(const FieldResponse& a1, const FieldResponse& a2,
                                  double mean_field) {
  if (a1.padded_size != a2.padded_size || a1.dt != a2.dt)
    throw InvalidParams("photon_number_noise: a1 and a2 must share one frequency grid");
  auto t1 = ifft(a1.freq);
  auto t2 = ifft(a2.freq);
  FieldResponse n;
  n.dt = a1.dt;
  n.padded_size = a1.padded_size;
  n.trace_size = a1.trace_size;
  std::vector<std::complex<double>> ncav(n.padded_size);
  for (std::size_t i = 0; i < n.padded_size; ++i) {
    const std::complex<double> lin = mean_field * (t1[i] + t2[i]);
    ncav[i] = lin + std::conj(lin) + std::norm(t1[i]);
  }
  fft_forward(ncav);
  n.freq = std::move(ncav);
  return n;
}

double residual_noise_floor(const CavityMode& cav, double s_dd_autoconvolution, double omega) {
  if (!(cav.kappa > 0.0)) throw InvalidParams("residual_noise_floor: kappa must be positive");
  const double d2 = cav.detuning * cav.detuning;
  const double k2 = cav.kappa * cav.kappa;
  const double a = 4.0 * d2 + k2;
  const double b = k2 - 12.0 * d2;
  const double num = a * b * b + 8.0 * (3.0 * k2 - 4.0 * d2) * k2 * omega * omega;
  return s_dd_autoconvolution * num / (a * a * a * a * a);
}

void HomodyneGeometry::validate() const {
  if (i_lo_over_i_sig < 0.0 || i_hom_over_i_sig < 0.0)
    throw InvalidParams("homodyne geometry: intensity ratios must be nonnegative");
  if (!(visibility > 0.0) || visibility > 1.0)
    throw InvalidParams("homodyne geometry: visibility must lie in (0, 1]");
}

double cavity_rotation_angle(const CavityMode& cav) {
  return std::atan2(cav.detuning, 0.5 * cav.kappa);
}

namespace {
HomodyneGeometry geometry_for(double theta, const CavityMode& cav, double visibility) {
  const double phi = theta - 2.0 * cavity_rotation_angle(cav);
  const double c = std::cos(phi);
  if (c <= 1e-12)
    throw NoCancellation("lo_settings_for_quadrature: quadrature unreachable at this detuning");
  HomodyneGeometry g;
  g.theta = theta;
  g.visibility = visibility;
  const double ahom = 1.0 / (2.0 * c);  // |a_hom| / |a_sig|
  const std::complex<double> hom = ahom * std::exp(kI * theta);
  g.i_hom_over_i_sig = std::norm(hom);
  g.i_lo_over_i_sig = std::norm(hom - 1.0);  // r*a_LO = a_hom - a_sig
  return g;
}
}  // namespace

HomodyneGeometry lo_settings_for_quadrature(double theta, const CavityMode& cav,
                                            double visibility) {
  return geometry_for(theta, cav, visibility);
}

std::pair<HomodyneGeometry, HomodyneGeometry> lo_settings_for_hom_ratio(
    double i_hom_over_i_sig, const CavityMode& cav, double visibility) {
  if (!(i_hom_over_i_sig > 0.0))
    throw InvalidParams("lo_settings_for_hom_ratio: intensity ratio must be positive");
  const double c = 1.0 / (2.0 * std::sqrt(i_hom_over_i_sig));
  if (c > 1.0)
    throw NoCancellation("lo_settings_for_hom_ratio: homodyne intensity below the cos bound");
  const double phi = std::acos(c);
  const double base = 2.0 * cavity_rotation_angle(cav);
  HomodyneGeometry g1 = geometry_for(base + phi, cav, visibility);
  HomodyneGeometry g2 = geometry_for(base - phi, cav, visibility);
  if (g2.i_lo_over_i_sig < g1.i_lo_over_i_sig) std::swap(g1, g2);
  return {g1, g2};
}

double homodyne_efficiency(const HomodyneGeometry& geom) {
  geom.validate();
  const double v2 = geom.visibility * geom.visibility;
  const double excess = geom.i_lo_over_i_sig * (1.0 / v2 - 1.0);
  return geom.i_hom_over_i_sig / (geom.i_hom_over_i_sig + excess);
}

}  // namespace omtk
