#include "omtk/model.hpp"

#include <algorithm>
#include <cmath>

#include "omtk/quad.hpp"

namespace omtk {

namespace {
constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

void MechanicalMode::validate() const {
  if (!(omega_m > 0.0)) throw InvalidParams("mechanical mode: omega_m must be positive");
  if (!(gamma_m > 0.0))
    throw InvalidParams("mechanical mode: gamma_m must be positive (infinite Q is rejected)");
  if (omega_m / gamma_m <= 10.0)
    throw InvalidParams("mechanical mode: quality factor must exceed 10");
  if (n_th < 0.0) throw InvalidParams("mechanical mode: n_th must be nonnegative");
  if (gamma_opt < 0.0) throw InvalidParams("mechanical mode: gamma_opt must be nonnegative");
  if (coupling_weight < 0.0)
    throw InvalidParams("mechanical mode: coupling_weight must be nonnegative");
}

void CavityMode::validate() const {
  if (!(kappa > 0.0)) throw InvalidParams("cavity: kappa must be positive");
  if (kappa_out < 0.0 || kappa_in < 0.0 || kappa_loss < 0.0)
    throw InvalidParams("cavity: coupling rates must be nonnegative");
  const double sum = kappa_out + kappa_in + kappa_loss;
  if (std::abs(sum - kappa) > 1e-9 * kappa)
    throw InvalidParams("cavity: kappa_out + kappa_in + kappa_loss must equal kappa");
}

void CouplingParams::validate() const {
  if (mean_field < 0.0) throw InvalidParams("coupling: mean_field must be nonnegative");
  if (g0 < 0.0 || g < 0.0) throw InvalidParams("coupling: rates must be nonnegative");
  const double expect = g0 * mean_field;
  const double scale = std::max({std::abs(g), std::abs(expect), 1e-300});
  if (std::abs(g - expect) > 1e-12 * scale)
    throw InvalidParams("coupling: g must equal g0 * mean_field");
}

void DetuningNoiseModel::validate() const {
  if (white_hz2_per_hz < 0.0) throw InvalidParams("detuning noise: white floor must be nonnegative");
  for (const auto& l : lorentzians) {
    if (!(l.width_hz > 0.0) || !(l.area_hz2 > 0.0))
      throw InvalidParams("detuning noise: Lorentzian widths and areas must be positive");
  }
}

void SystemParams::validate() const {
  if (modes.empty()) throw InvalidParams("system: at least one mechanical mode required");
  for (const auto& m : modes) m.validate();
  cavity.validate();
  coupling.validate();
  if (eta_d < 0.0 || eta_d > 1.0) throw InvalidParams("system: eta_d must lie in [0, 1]");
  classical_detuning_noise.validate();
}

cplx mech_susceptibility(const MechanicalMode& mode, double omega, bool damped) {
  const double gamma = damped ? mode.gamma_m + mode.gamma_opt : mode.gamma_m;
  return mode.omega_m /
         cplx(mode.omega_m * mode.omega_m - omega * omega, -omega * gamma);
}

cplx cavity_susceptibility(const CavityMode& cav, double omega) {
  return kInvSqrt2 / cplx(0.5 * cav.kappa, cav.detuning - omega);
}

namespace {

// chi_c of the response chain: the cavity resonance sits at
// omega_cavity - omega_laser = -detuning in the laser frame.
cplx chain_chi_c(const CavityMode& cav, double omega) {
  return kInvSqrt2 / cplx(0.5 * cav.kappa, -cav.detuning - omega);
}

}  // namespace

SusceptibilitySet susceptibility_chain(const SystemParams& params, double omega) {
  const auto& cav = params.cavity;
  const double g = params.coupling.g;
  const double abar = params.coupling.mean_field;

  SusceptibilitySet s;
  // gamma_opt here stands for damping from channels other than the modeled
  // probe (the probe's own backaction damping emerges from chi_mc_X).
  s.chi_m = mech_susceptibility(params.defect(), omega, /*damped=*/true);
  s.chi_c = chain_chi_c(cav, omega);
  const cplx cc = s.chi_c;
  const cplx ccm = std::conj(chain_chi_c(cav, -omega));
  s.chi_c_X = kI * (ccm - cc);
  s.chi_c_Y = -(ccm + cc);
  s.chi_mc_X = 1.0 / (1.0 + 2.0 * kSqrt2 * g * g * s.chi_m * s.chi_c_X);

  s.chi_Delta_X = abar * s.chi_c_X * s.chi_mc_X;
  s.chi_Pin_X = kSqrt2 * g * s.chi_m * s.chi_c_X * s.chi_mc_X;

  const std::array<double, 3> kappas{cav.kappa_out, cav.kappa_in, cav.kappa_loss};
  for (int i = 0; i < 3; ++i) {
    const double rk = std::sqrt(kappas[i]);
    s.chi_ain_X[i] = rk * cc * s.chi_mc_X;
    s.chi_aindag_X[i] = rk * ccm * s.chi_mc_X;
  }

  const cplx mech_fb = 2.0 * kSqrt2 * g * g * s.chi_m;  // cooling-mediated feedback on Y
  s.chi_Delta_Y = s.chi_c_Y * (abar - mech_fb * s.chi_Delta_X);
  s.chi_Pin_Y = kSqrt2 * g * s.chi_c_Y * s.chi_m * (1.0 - 2.0 * g * s.chi_Pin_X);
  for (int i = 0; i < 3; ++i) {
    const double rk = std::sqrt(kappas[i]);
    s.chi_ain_Y[i] = -kI * rk * cc - mech_fb * s.chi_c_Y * s.chi_ain_X[i];
    s.chi_aindag_Y[i] = kI * rk * ccm - mech_fb * s.chi_c_Y * s.chi_aindag_X[i];
  }

  const double ct = std::cos(params.theta);
  const double st = std::sin(params.theta);
  const double ra = std::sqrt(cav.kappa_out);
  s.chi_Delta_theta = -ra * (s.chi_Delta_X * ct + s.chi_Delta_Y * st);
  s.chi_Pin_theta = -ra * (s.chi_Pin_X * ct + s.chi_Pin_Y * st);
  for (int i = 0; i < 3; ++i) {
    // The detected port is channel a for every input; only a carries the
    // direct-reflection term.
    s.chi_ain_theta[i] = -ra * (s.chi_ain_X[i] * ct + s.chi_ain_Y[i] * st);
    s.chi_aindag_theta[i] = -ra * (s.chi_aindag_X[i] * ct + s.chi_aindag_Y[i] * st);
  }
  s.chi_ain_theta[kOut] += kInvSqrt2 * std::exp(-kI * params.theta);
  s.chi_aindag_theta[kOut] += kInvSqrt2 * std::exp(kI * params.theta);
  return s;
}

double spurious_detuning_noise(const SystemParams& params, double omega) {
  const auto& d = params.classical_detuning_noise;
  if (d.empty()) return 0.0;
  const double f = std::abs(omega) / tau;
  double s_nunu = d.white_hz2_per_hz;  // single-sided, Hz^2/Hz
  for (const auto& l : d.lorentzians) {
    const double dx = f - l.center_hz;
    s_nunu += l.area_hz2 * (l.width_hz / tau) / (dx * dx + 0.25 * l.width_hz * l.width_hz);
  }
  // to two-sided angular units: S_DD(omega) = (2pi)^2 S_nunu(f) / 2
  return 0.5 * tau * tau * s_nunu;
}

namespace {

double thermal_input_spectrum(const MechanicalMode& m, double omega, ThermalCorrelator c) {
  const double x = std::abs(omega) / m.omega_m;
  if (c == ThermalCorrelator::symmetrized) return x * (m.n_th + 0.5);
  return omega > 0.0 ? x * (m.n_th + 1.0) : x * m.n_th;
}

// Eq (S_xx) integrand at signed omega (two-sided, vacuum 1/2).
double detected_raw(const SystemParams& p, double omega, const SpectrumOptions& opt) {
  const SusceptibilitySet s = susceptibility_chain(p, omega);
  const double s_dd = opt.s_dd ? opt.s_dd(omega) : spurious_detuning_noise(p, omega);
  double acc = std::norm(s.chi_Delta_theta) * s_dd;
  acc += std::norm(s.chi_Pin_theta) * 2.0 * p.defect().gamma_m *
         thermal_input_spectrum(p.defect(), omega, opt.correlator);
  for (int i = 0; i < 3; ++i) acc += std::norm(s.chi_aindag_theta[i]);
  return p.eta_d * acc + 0.5 * (1.0 - p.eta_d);
}

}  // namespace

double detected_spectrum(const SystemParams& params, double omega, const SpectrumOptions& opt) {
  return detected_raw(params, omega, opt) + detected_raw(params, -omega, opt);
}

double mechanical_spectrum(const SystemParams& params, double omega, const SpectrumOptions& opt) {
  const SusceptibilitySet s = susceptibility_chain(params, omega);
  const double g = params.coupling.g;
  const double s_dd = opt.s_dd ? opt.s_dd(omega) : spurious_detuning_noise(params, omega);
  double acc = std::norm(2.0 * g * s.chi_Delta_X) * s_dd;
  acc += std::norm(1.0 - 2.0 * g * s.chi_Pin_X) * 2.0 * params.defect().gamma_m *
         thermal_input_spectrum(params.defect(), omega, opt.correlator);
  for (int i = 0; i < 3; ++i) acc += std::norm(2.0 * g * s.chi_aindag_X[i]);
  return std::norm(s.chi_m) * acc;
}

OccupancyResult occupancy_from_spectrum(const SpectrumModel& model, double rel_tol) {
  if (model.kind != SpectrumModel::Kind::mechanical_position)
    throw InvalidParams("occupancy_from_spectrum requires a mechanical_position model");
  const auto& p = model.params;
  const double om = p.defect().omega_m;

  // Effective linewidth of the defect peak sets the substitution scale; the
  // chain's dynamical backaction can broaden it far beyond gamma_m.
  const SidebandRates sb = sideband_rates(p);
  const double width =
      std::max(p.defect().gamma_m + p.defect().gamma_opt + std::max(sb.gamma_opt(), 0.0), 1e-6);

  std::vector<std::pair<double, double>> peaks{{om, 0.5 * width}};
  for (const auto& l : p.classical_detuning_noise.lorentzians)
    peaks.emplace_back(tau * l.center_hz, 0.5 * tau * l.width_hz + 0.5 * width);

  const double lo = 0.05 * om;
  const double hi = 4.0 * om;
  auto f_pos = [&](double w) { return model(w); };
  auto f_neg = [&](double w) { return model(-w); };
  QuadResult qp = integrate_peaked(f_pos, lo, hi, peaks, rel_tol);
  QuadResult qn = integrate_peaked(f_neg, lo, hi, peaks, rel_tol);
  if (!qp.converged || !qn.converged)
    throw NonConvergent("occupancy_from_spectrum: adaptive integration failed its tolerance");

  OccupancyResult r;
  r.integral = (qp.value + qn.value) / tau;
  r.truncation_error = (qp.error + qn.error) / tau;
  r.occupancy = r.integral - 0.5;
  return r;
}

SidebandRates sideband_rates(const SystemParams& params) {
  const auto& c = params.cavity;
  const double g = params.coupling.g * params.defect().coupling_weight;
  const double om = params.defect().omega_m;
  const double k2 = 0.5 * c.kappa;
  SidebandRates r;
  r.anti_stokes = g * g * c.kappa / (k2 * k2 + (c.detuning + om) * (c.detuning + om));
  r.stokes = g * g * c.kappa / (k2 * k2 + (c.detuning - om) * (c.detuning - om));
  return r;
}

DerivedRates derived_rates(const SystemParams& params) {
  params.validate();
  const auto& m = params.defect();
  DerivedRates r;
  r.gamma_th = m.n_th * m.gamma_m;
  const SidebandRates sb = sideband_rates(params);
  r.gamma_qba = 0.5 * (sb.anti_stokes + sb.stokes);
  r.gamma_opt = sb.gamma_opt();
  const auto& c = params.cavity;
  r.gamma_qba_bad_cavity = params.coupling.g * params.coupling.g * c.kappa /
                           (0.25 * c.kappa * c.kappa + c.detuning * c.detuning);
  r.gamma_meas = params.eta_d * r.gamma_qba;
  r.c_q = r.gamma_th > 0.0 ? r.gamma_qba / r.gamma_th : 0.0;
  const double decoherence = r.gamma_th + r.gamma_qba;
  r.eta_meas = decoherence > 0.0 ? r.gamma_meas / decoherence : 0.0;
  r.n_imp = r.gamma_meas > 0.0 ? m.gamma_m / (16.0 * r.gamma_meas) : 0.0;
  r.heisenberg_ratio = r.eta_meas > 0.0 ? 1.0 / std::sqrt(r.eta_meas) : 0.0;
  return r;
}

double g_for_cooperativity(const SystemParams& params, double c_q) {
  SystemParams p = params;
  p.coupling.g = 1.0;
  p.coupling.g0 = 1.0;
  p.coupling.mean_field = 1.0;
  const SidebandRates sb = sideband_rates(p);
  const double qba_unit = 0.5 * (sb.anti_stokes + sb.stokes);
  const double gamma_th = p.defect().n_th * p.defect().gamma_m;
  return std::sqrt(c_q * gamma_th / qba_unit);
}

double ideal_cooling_occupancy(double omega_m, double kappa, double detuning) {
  if (detuning >= 0.0)
    throw InvalidDetuning("ideal_cooling_occupancy: detuning must be negative (red)");
  const double num = (omega_m + detuning) * (omega_m + detuning) + 0.25 * kappa * kappa;
  return num / (-4.0 * detuning * omega_m);
}

MembraneDesign membrane_design_helpers(const PillarGeometry& pil, const MembraneFilm& film,
                                       double omega) {
  if (film.h <= 0.0 || film.rho <= 0.0 || film.stress <= 0.0 || film.youngs <= 0.0)
    throw InvalidParams("membrane_design_helpers: film properties must be positive");
  if (pil.a_pil <= 0.0 && pil.h_pil != 0.0)
    throw InvalidParams("membrane_design_helpers: pillar lattice constant must be positive");

  MembraneDesign d;
  const double load = (pil.a_pil > 0.0)
                          ? (std::numbers::pi / (2.0 * std::sqrt(3.0))) *
                                (pil.rho_pil * pil.h_pil) / (film.rho * film.h) *
                                (pil.d_pil / pil.a_pil) * (pil.d_pil / pil.a_pil)
                          : 0.0;
  d.rho_eff = film.rho * (1.0 + load);
  d.d_q_clampless = 12.0 * (1.0 - film.poisson * film.poisson) * film.stress * film.stress /
                    (film.youngs * film.rho * film.h * film.h * omega * omega);
  d.q_total = d.d_q_clampless * film.q_int;
  d.wavevector = omega * std::sqrt(d.rho_eff / film.stress);
  return d;
}

}  // namespace omtk
