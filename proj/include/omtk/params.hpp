#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "omtk/errors.hpp"

namespace omtk {

inline constexpr double tau = 2.0 * std::numbers::pi;

// All rates and frequencies are angular (rad/s) internally. Config files and
// CSV outputs use ordinary frequency (Hz) and degrees; conversion happens at
// the I/O boundary only.

struct MechanicalMode {
  double omega_m = 0.0;          // resonance frequency, rad/s
  double gamma_m = 0.0;          // energy decay rate, rad/s
  double n_th = 0.0;             // mean thermal bath occupancy
  double gamma_opt = 0.0;        // extra (broadband) damping, rad/s
  double coupling_weight = 1.0;  // g scaling relative to the defect mode

  double quality_factor() const { return omega_m / gamma_m; }
  void validate() const;
};

struct CavityMode {
  double kappa = 0.0;       // total linewidth, rad/s
  double kappa_out = 0.0;   // output coupling (detected port), rad/s
  double kappa_in = 0.0;    // input coupling, rad/s
  double kappa_loss = 0.0;  // internal loss, rad/s
  double detuning = 0.0;    // mean laser-cavity detuning  omega_laser - omega_cavity, rad/s

  void validate() const;
};

// Detuning at which the quadratic term of the cavity's detuning-to-intensity
// transduction vanishes. Negative: laser red-detuned from the cavity.
inline double magic_detuning(double kappa) { return -kappa / (2.0 * std::sqrt(3.0)); }

struct CouplingParams {
  double g0 = 0.0;          // vacuum optomechanical coupling, rad/s
  double g = 0.0;           // field-enhanced coupling g = g0 * mean_field, rad/s
  double mean_field = 0.0;  // intracavity amplitude, real by phase convention

  void validate() const;
};

// One classical cavity-frequency-noise Lorentzian. Units are those of the
// config file: Hz for center/width, Hz^2 for the integrated (single-sided)
// area of S_nunu.
struct LorentzianNoise {
  double center_hz = 0.0;
  double width_hz = 0.0;  // FWHM
  double area_hz2 = 0.0;
};

struct DetuningNoiseModel {
  std::vector<LorentzianNoise> lorentzians;
  double white_hz2_per_hz = 0.0;

  void validate() const;
  bool empty() const { return lorentzians.empty() && white_hz2_per_hz == 0.0; }
};

struct SystemParams {
  std::vector<MechanicalMode> modes;  // index 0 = defect mode
  CavityMode cavity;
  CouplingParams coupling;
  double eta_d = 1.0;  // total detection efficiency
  double theta = 0.0;  // homodyne quadrature angle, rad
  DetuningNoiseModel classical_detuning_noise;

  // Config metadata; neither enters any implemented equation.
  double x_zpf = 1.0e-15;       // m
  double effective_mass = 0.0;  // kg

  const MechanicalMode& defect() const { return modes.at(0); }
  void validate() const;
};

struct DerivedRates {
  double gamma_th = 0.0;    // thermal decoherence rate n_th*Gamma_m, rad/s
  double gamma_qba = 0.0;   // quantum backaction rate, rad/s
  double gamma_qba_bad_cavity = 0.0;  // omega->0 evaluation, for comparison
  double gamma_opt = 0.0;   // dynamical backaction damping of the defect mode, rad/s
  double gamma_meas = 0.0;  // measurement rate eta_d*gamma_qba, rad/s
  double c_q = 0.0;         // quantum cooperativity gamma_qba/gamma_th
  double eta_meas = 0.0;    // gamma_meas/(gamma_th + gamma_qba)
  double n_imp = 0.0;       // imprecision quanta gamma_m/(16 gamma_meas)
  double heisenberg_ratio = 0.0;  // sqrt(S_imp S_FF_tot)/(hbar/2) = 1/sqrt(eta_meas)
};

}  // namespace omtk
