#pragma once

#include <array>
#include <complex>
#include <functional>

#include "omtk/params.hpp"

namespace omtk {

using cplx = std::complex<double>;

// Channel order for the cavity input fields: a = output port (detected),
// b = input port, c = internal loss.
enum Channel : int { kOut = 0, kIn = 1, kLoss = 2 };

// All response functions of the Langevin chain at one Fourier frequency.
//
// Sign conventions: the `detuning` field of CavityMode is the laser-cavity
// detuning omega_laser - omega_cavity (magic detuning is negative). Inside
// the response chain the cavity resonance sits at omega_cavity - omega_laser
// = -detuning in the laser rotating frame, so the chain evaluates its
// chi_c-type factors at that offset. The standalone cavity_susceptibility()
// below keeps the literal field sign.
struct SusceptibilitySet {
  cplx chi_m;     // mechanical
  cplx chi_c;     // cavity (chain convention, see note above)
  cplx chi_c_X, chi_c_Y;
  cplx chi_mc_X;  // optomechanical closed-loop factor
  cplx chi_Delta_X, chi_Pin_X;
  std::array<cplx, 3> chi_ain_X, chi_aindag_X;
  cplx chi_Delta_Y, chi_Pin_Y;
  std::array<cplx, 3> chi_ain_Y, chi_aindag_Y;
  cplx chi_Delta_theta, chi_Pin_theta;
  std::array<cplx, 3> chi_ain_theta, chi_aindag_theta;
};

cplx mech_susceptibility(const MechanicalMode& mode, double omega, bool damped = false);
cplx cavity_susceptibility(const CavityMode& cav, double omega);

SusceptibilitySet susceptibility_chain(const SystemParams& params, double omega);

// Spurious-mode + white cavity-frequency noise S_DeltaDelta, evaluated
// two-sided in rad^2/s^2 per rad/s (the descriptor stores single-sided
// Hz^2/Hz; see the conversion note in model.cpp).
double spurious_detuning_noise(const SystemParams& params, double omega);

// Thermal input momentum spectrum S_PinPin at signed omega. The symmetrized
// form (n_th + 1/2)|omega|/Omega_m is the default everywhere; the asymmetric
// one-sided correlators are available for sideband-asymmetry studies.
enum class ThermalCorrelator { symmetrized, asymmetric };

struct SpectrumOptions {
  ThermalCorrelator correlator = ThermalCorrelator::symmetrized;
  // Override for S_DeltaDelta(omega) (two-sided, rad^2/s^2 per rad/s);
  // defaults to spurious_detuning_noise of the params.
  std::function<double(double)> s_dd;
};

// Single-sided detected quadrature PSD, shot noise = 1, at omega >= 0.
double detected_spectrum(const SystemParams& params, double omega,
                         const SpectrumOptions& opt = {});

// Two-sided mechanical position PSD S_QQ at signed omega (quadrature units,
// integral over d omega/2pi of both signs = n + 1/2).
double mechanical_spectrum(const SystemParams& params, double omega,
                           const SpectrumOptions& opt = {});

struct SpectrumModel {
  enum class Kind { detected_quadrature, mechanical_position };
  Kind kind = Kind::detected_quadrature;
  SystemParams params;
  SpectrumOptions options;

  double operator()(double omega) const {
    return kind == Kind::detected_quadrature ? detected_spectrum(params, omega, options)
                                             : mechanical_spectrum(params, omega, options);
  }
};

struct OccupancyResult {
  double occupancy = 0.0;
  double integral = 0.0;         // integral of S_QQ d omega / 2pi over both signs
  double truncation_error = 0.0; // estimated absolute error on the integral
};

// n_m from the frequency integral of a mechanical-position SpectrumModel.
// Throws NonConvergent when the adaptive quadrature cannot meet rel_tol.
OccupancyResult occupancy_from_spectrum(const SpectrumModel& model, double rel_tol = 1e-8);

// Sideband scattering rates of the defect mode at the configured detuning.
struct SidebandRates {
  double anti_stokes = 0.0;  // cooling
  double stokes = 0.0;       // heating
  double gamma_opt() const { return anti_stokes - stokes; }
  double n_min() const { return stokes / (anti_stokes - stokes); }
};
SidebandRates sideband_rates(const SystemParams& params);

DerivedRates derived_rates(const SystemParams& params);

// Field-enhanced coupling that realizes a requested quantum cooperativity at
// the configured cavity/detuning (inverse of derived_rates' c_q).
double g_for_cooperativity(const SystemParams& params, double c_q);

// ((Omega_m + detuning)^2 + (kappa/2)^2) / (-4 detuning Omega_m).
// Throws InvalidDetuning unless detuning < 0.
double ideal_cooling_occupancy(double omega_m, double kappa, double detuning);

// Closed-form membrane design helpers.
struct PillarGeometry {
  double d_pil = 0.0;    // pillar diameter, m
  double a_pil = 0.0;    // lattice constant, m
  double h_pil = 0.0;    // pillar thickness, m
  double rho_pil = 0.0;  // pillar density, kg/m^3
};
struct MembraneFilm {
  double h = 0.0;        // film thickness, m
  double rho = 0.0;      // film density, kg/m^3
  double stress = 0.0;   // deposition stress sigma, Pa
  double youngs = 0.0;   // Young's modulus E, Pa
  double poisson = 0.0;  // nu
  double q_int = 0.0;    // intrinsic (material) quality factor
};
struct MembraneDesign {
  double rho_eff = 0.0;      // mass-loaded effective density, kg/m^3
  double d_q_clampless = 0.0;
  double q_total = 0.0;      // D_Q * Q_int
  double wavevector = 0.0;   // k = Omega sqrt(rho_eff/sigma), 1/m
};
MembraneDesign membrane_design_helpers(const PillarGeometry& pil, const MembraneFilm& film,
                                       double omega);

}  // namespace omtk
