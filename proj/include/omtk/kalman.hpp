#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "omtk/params.hpp"
#include "omtk/record.hpp"

namespace omtk {

// Per-mode rates of the rotating-frame estimation model (all rad/s; offset is
// Omega_i - Omega_m, signed).
struct ModeRates {
  double offset = 0.0;
  double gamma_m = 0.0;
  double gamma_opt = 0.0;
  double gamma_th = 0.0;
  double gamma_qba = 0.0;
  double gamma_meas = 0.0;

  double gamma_eff() const { return gamma_m + gamma_opt; }
};

struct FilterModel {
  std::vector<ModeRates> modes;
  double dt = 0.0;  // record sample interval, s
  int cov_oversample = 10;
  bool discretization_compensation = true;

  int n_modes() const { return static_cast<int>(modes.size()); }
  int dim() const { return 2 * n_modes(); }
  void validate() const;

  Eigen::MatrixXd drift() const;              // A (continuous)
  Eigen::MatrixXd diffusion() const;          // D (continuous, per quadrature pair)
  Eigen::MatrixXd measurement() const;        // M (2 x 2N)
};

struct GaussianState {
  double t = 0.0;
  Eigen::VectorXd mean;  // (X1, Y1, X2, Y2, ...)
  Eigen::MatrixXd cov;
};

struct FilterOptions {
  std::vector<double> instants;   // snapshot times (s, forward time)
  int store_means_every = 0;      // 0 = no bulk mean storage
  bool store_innovations = false;
  double divergence_factor = 10.0;
};

struct FilterRun {
  std::vector<GaussianState> states;  // at the requested instants
  Eigen::MatrixXd steady_cov;
  bool cov_converged = false;
  long cov_converged_sample = -1;
  Eigen::VectorXd unconditional_diag;
  std::vector<Eigen::VectorXd> means;              // decimated bulk storage
  std::vector<std::array<double, 2>> innovations;  // normalized, unit variance if matched
};

// Forward (prediction) filter. Snapshot at instant t_j holds the conditional
// state given samples strictly before t_j.
FilterRun filter_predict(const MeasurementRecord& record, const FilterModel& model,
                         const FilterOptions& options = {});

// Time-reversed (retrodiction) filter: identical update run on the reversed
// record with negated frequency offsets. Snapshot at t_j holds the state
// given samples at and after t_j, so prediction/retrodiction data sets are
// disjoint at shared instants.
FilterRun filter_retrodict(const MeasurementRecord& record, const FilterModel& model,
                           const FilterOptions& options = {});

// Unconditional (no measurement) steady covariance: Lyapunov fixed point.
Eigen::MatrixXd unconditional_covariance(const FilterModel& model);

// Conditional steady covariance: Riccati fixed point at the oversampled rate.
Eigen::MatrixXd steady_state_covariance(const FilterModel& model);

// Eq (Vx): single-mode analytic steady variance.
double steady_state_single_mode(double gamma_eff, double gamma_th, double gamma_qba,
                                double gamma_meas);

double purity(double occupancy);

// Constant feedback filter H0 = -2g/sqrt(eta kappa_a) that cancels the
// cooling-induced correlations; compose(H1) returns H0 + H1.
std::complex<double> feedback_cancellation_filter(const SystemParams& params, double omega);

struct ReconstructionResult {
  Eigen::MatrixXd cov;        // reconstructed conditional covariance
  Eigen::MatrixXd std_error;  // per-entry standard error
  int n_slices = 0;
  bool conditioned = true;    // false when no measurement information was present
  // ||r^r - r^p||^2 averaged per mode, against the 4V identity
  std::vector<double> mean_square_difference;
};

// C = 1/2 << (r^r - r^p)(r^r - r^p)^T >> over aligned conditioning instants.
// Throws InsufficientSlices below 100 slices.
ReconstructionResult reconstruct_covariance(const FilterRun& pred, const FilterRun& retro);

struct CoupledOccupancies {
  double n_full = 0.0;       // from the full mechanical spectrum integral
  double n_decoupled = 0.0;  // defect Lorentzian alone (spurious noise nulled)
};
CoupledOccupancies coupled_vs_decoupled_occupancy(const SystemParams& params);

// FilterModel from SystemParams: mode 0 is the defect; spurious modes scale
// gamma_qba and gamma_meas with coupling_weight^2.
FilterModel filter_model_from_params(const SystemParams& params, double sample_rate);

}  // namespace omtk
