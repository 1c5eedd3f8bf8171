#pragma once

#include <complex>
#include <vector>

#include "omtk/params.hpp"

namespace omtk {

// Cavity detuning fluctuation record deltaDelta(t) on a uniform grid.
struct DetuningNoiseTrace {
  std::vector<double> samples;  // rad/s
  double dt = 0.0;              // s

  void validate() const;
  std::size_t size() const { return samples.size(); }
  double sample_rate() const { return 1.0 / dt; }
};

// Frequency-domain field record on the (zero-padded) FFT grid of a trace.
struct FieldResponse {
  std::vector<std::complex<double>> freq;  // spectrum, bin k at frequency bin_hz(k)
  double dt = 0.0;
  std::size_t padded_size = 0;  // transform length (2x trace length)
  std::size_t trace_size = 0;

  double bin_hz(std::size_t k) const;
  std::vector<std::complex<double>> time_domain() const;  // first trace_size samples
};

// First and second order Liouville-Neumann field responses to a detuning
// trace. quadratic_field_response throws AliasWarning when the input
// occupies more than 40% of the representable band.
FieldResponse linear_field_response(const DetuningNoiseTrace& trace, const CavityMode& cav,
                                    double mean_field);
FieldResponse quadratic_field_response(const DetuningNoiseTrace& trace, const CavityMode& cav,
                                       double mean_field);

struct QuadraticResponse {
  FieldResponse a1;
  FieldResponse a2;
  double third_order_residual = 0.0;  // ||a3||/||a2|| from one extra series iteration
};
QuadraticResponse field_response_series(const DetuningNoiseTrace& trace, const CavityMode& cav,
                                        double mean_field);

// Intracavity photon number fluctuation n_cav(t)/spectrum from a1, a2:
// abar*(a1+a2) + h.c. + |a1|^2 (time domain).
FieldResponse photon_number_noise(const FieldResponse& a1, const FieldResponse& a2,
                                  double mean_field);

// Finite-kappa residual transduction kernel multiplying the S_DD
// autoconvolution (zero at the magic detuning and omega = 0).
double residual_noise_floor(const CavityMode& cav, double s_dd_autoconvolution, double omega);

struct HomodyneGeometry {
  double theta = 0.0;            // quadrature angle, rad
  double i_lo_over_i_sig = 0.0;  // injected LO intensity / signal intensity
  double i_hom_over_i_sig = 0.0; // combined-field intensity / signal intensity
  double visibility = 1.0;       // mode-matching interference visibility
  double r = 0.0;                // beam-splitter amplitude reflectivity (metadata)

  void validate() const;
};

// LO settings that cancel the nonlinear mixing noise at quadrature angle
// theta. Throws NoCancellation when theta is unreachable at this detuning.
HomodyneGeometry lo_settings_for_quadrature(double theta, const CavityMode& cav,
                                            double visibility = 1.0);

// Both angles that share the same locked homodyne intensity; the first has
// the smaller LO power.
std::pair<HomodyneGeometry, HomodyneGeometry> lo_settings_for_hom_ratio(
    double i_hom_over_i_sig, const CavityMode& cav, double visibility = 1.0);

double homodyne_efficiency(const HomodyneGeometry& geom);

// arg chi_opt(0) = atan2(detuning, kappa/2); the cavity-induced quadrature
// rotation (-30 deg at the magic detuning).
double cavity_rotation_angle(const CavityMode& cav);

}  // namespace omtk
