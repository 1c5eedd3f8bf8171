#include "omtk/kalman.hpp"

#include <algorithm>
#include <cmath>

#include "omtk/model.hpp"
#include "omtk/quad.hpp"

namespace omtk {

void FilterModel::validate() const {
  if (modes.empty()) throw InvalidParams("filter model: no modes");
  if (!(dt > 0.0)) throw InvalidParams("filter model: dt must be positive");
  if (cov_oversample < 1) throw InvalidParams("filter model: cov_oversample must be >= 1");
  for (const auto& m : modes) {
    if (m.gamma_m < 0.0 || m.gamma_opt < 0.0 || m.gamma_th < 0.0 || m.gamma_qba < 0.0 ||
        m.gamma_meas < 0.0)
      throw InvalidParams("filter model: rates must be nonnegative");
    if (!(m.gamma_eff() > 0.0)) throw InvalidParams("filter model: zero damping is rejected");
  }
}

Eigen::MatrixXd FilterModel::drift() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < n_modes(); ++i) {
    const auto& m = modes[i];
    a(2 * i, 2 * i) = a(2 * i + 1, 2 * i + 1) = -0.5 * m.gamma_eff();
    a(2 * i, 2 * i + 1) = m.offset;
    a(2 * i + 1, 2 * i) = -m.offset;
  }
  return a;
}

Eigen::MatrixXd FilterModel::diffusion() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < n_modes(); ++i) {
    const double diag = modes[i].gamma_th + 0.5 * modes[i].gamma_eff();
    d(2 * i, 2 * i) += diag;
    d(2 * i + 1, 2 * i + 1) += diag;
  }
  // backaction is a common force: correlated across modes, per quadrature
  for (int i = 0; i < n_modes(); ++i)
    for (int j = 0; j < n_modes(); ++j) {
      const double q = std::sqrt(modes[i].gamma_qba * modes[j].gamma_qba);
      d(2 * i, 2 * j) += q;
      d(2 * i + 1, 2 * j + 1) += q;
    }
  return d;
}

Eigen::MatrixXd FilterModel::measurement() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, dim());
  for (int i = 0; i < n_modes(); ++i) {
    const double r = std::sqrt(4.0 * modes[i].gamma_meas);
    m(0, 2 * i) = r;
    m(1, 2 * i + 1) = r;
  }
  return m;
}

namespace {

Eigen::MatrixXd lyapunov_fixed_point(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
  // Euler integration of dC = AC + CA^T + D to stationarity; stable for any
  // step below 1/max-rate.
  const double rate = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double step = 0.2 / std::max(rate, 1e-300);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  Eigen::MatrixXd prev = c;
  for (int it = 0; it < 2000000; ++it) {
    c += (a * c + c * a.transpose() + d) * step;
    if (it % 64 == 0) {
      if ((c - prev).cwiseAbs().maxCoeff() <
          1e-13 * std::max(c.cwiseAbs().maxCoeff(), 1e-300) && it > 0)
        break;
      prev = c;
    }
  }
  return 0.5 * (c + c.transpose());
}

struct CompensatedDrift {
  // per-mode 2x2 block [[a, b], [-b, a]]
  std::vector<double> diag, rot;
};

CompensatedDrift compensated_drift(const FilterModel& model) {
  CompensatedDrift cd;
  const double dt = model.dt;
  for (const auto& m : model.modes) {
    const double delta = m.offset;
    double gamma = m.gamma_eff();
    double rot = delta;
    if (model.discretization_compensation && dt > 0.0) {
      // match I + A' dt to the exact one-step propagator rotation(delta dt) *
      // exp(-gamma dt / 2)
      gamma = m.gamma_eff() + 2.0 * (1.0 - std::cos(delta * dt)) / dt;
      rot = std::sin(delta * dt) / dt;
    }
    cd.diag.push_back(-0.5 * gamma);
    cd.rot.push_back(rot);
  }
  return cd;
}

Eigen::MatrixXd riccati_fixed_point(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                    const Eigen::MatrixXd& m, double dt_cov,
                                    const Eigen::MatrixXd& c0) {
  Eigen::MatrixXd c = c0;
  const double gain_scale = m.cwiseAbs().maxCoeff();
  const double lam = gain_scale * gain_scale * std::max(c.cwiseAbs().maxCoeff(), 1e-300) +
                     a.cwiseAbs().rowwise().sum().maxCoeff();
  const double step = std::min(dt_cov, 0.2 / lam);
  Eigen::MatrixXd gain;
  Eigen::MatrixXd prev = c;
  for (int it = 0; it < 4000000; ++it) {
    gain = c * m.transpose();
    c += (a * c + c * a.transpose() + d - gain * gain.transpose()) * step;
    if (it % 64 == 0 && it > 0) {
      if ((c - prev).cwiseAbs().maxCoeff() < 1e-14 * std::max(c.cwiseAbs().maxCoeff(), 1e-300))
        return 0.5 * (c + c.transpose());
      prev = c;
    }
  }
  throw NonConvergent("riccati_fixed_point: no stationary covariance found");
}

FilterRun run_filter(const MeasurementRecord& record, const FilterModel& model,
                     const FilterOptions& options, bool reversed) {
  record.validate();
  model.validate();
  if (std::abs(record.dt() - model.dt) > 1e-12 * model.dt)
    throw InvalidParams("filter: record and model sample intervals differ");

  const int nm = model.n_modes();
  const int dim = model.dim();
  const std::size_t n = record.size();
  const double dt = model.dt;
  const double sqrt_dt = std::sqrt(dt);

  FilterModel eff = model;
  if (reversed)
    for (auto& m : eff.modes) m.offset = -m.offset;

  const Eigen::MatrixXd a = eff.drift();
  const Eigen::MatrixXd d = eff.diffusion();
  const Eigen::MatrixXd meas = eff.measurement();
  const Eigen::MatrixXd c_uncond = lyapunov_fixed_point(a, d);

  FilterRun out;
  out.unconditional_diag = c_uncond.diagonal();

  // The covariance evolution is measurement independent; it is propagated at
  // the oversampled rate alongside the sample loop until its fixed point is
  // reached, after which the converged gain is reused.
  const double dt_cov = dt / eff.cov_oversample;
  Eigen::MatrixXd c = c_uncond;
  Eigen::MatrixXd gain = c * meas.transpose();
  bool cov_frozen = false;

  // Requested instants -> sample indices. Snapshot before processing sample
  // j: state given samples < j (forward) or, after output reversal, given
  // samples >= j (retrodiction).
  std::vector<std::pair<std::size_t, std::size_t>> snap;  // (sample index in run order, output slot)
  out.states.resize(options.instants.size());
  for (std::size_t q = 0; q < options.instants.size(); ++q) {
    const double t = options.instants[q];
    long j = std::lround(t * record.sample_rate);
    j = std::clamp<long>(j, 0, static_cast<long>(n));
    const std::size_t run_index = reversed ? n - static_cast<std::size_t>(j)
                                           : static_cast<std::size_t>(j);
    snap.emplace_back(run_index, q);
    out.states[q].t = static_cast<double>(j) * dt;
  }
  std::sort(snap.begin(), snap.end());

  // compensated mean propagator blocks
  const CompensatedDrift cd = compensated_drift(eff);

  Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
  std::vector<double> rm(nm);
  for (int i = 0; i < nm; ++i) rm[i] = std::sqrt(4.0 * eff.modes[i].gamma_meas);

  if (options.store_innovations) out.innovations.reserve(n);
  std::size_t snap_pos = 0;

  auto take_snapshots = [&](std::size_t k) {
    while (snap_pos < snap.size() && snap[snap_pos].first == k) {
      GaussianState& g = out.states[snap[snap_pos].second];
      g.mean = state;
      g.cov = c;
      ++snap_pos;
    }
  };

  for (std::size_t k = 0; k < n; ++k) {
    take_snapshots(k);
    const std::size_t src = reversed ? n - 1 - k : k;
    const double yx = record.i_x[src];
    const double yy = record.i_y[src];
    // innovation: i dt - M s dt, with i dt = y sqrt(dt)
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < nm; ++i) {
      mx += rm[i] * state(2 * i);
      my += rm[i] * state(2 * i + 1);
    }
    const double ix = yx * sqrt_dt - mx * dt;
    const double iy = yy * sqrt_dt - my * dt;
    if (options.store_innovations)
      out.innovations.push_back({ix / sqrt_dt, iy / sqrt_dt});

    Eigen::VectorXd next(dim);
    for (int i = 0; i < nm; ++i) {
      const double x = state(2 * i), y = state(2 * i + 1);
      next(2 * i) = x + (cd.diag[i] * x + cd.rot[i] * y) * dt;
      next(2 * i + 1) = y + (cd.diag[i] * y - cd.rot[i] * x) * dt;
    }
    for (int r = 0; r < dim; ++r) next(r) += gain(r, 0) * ix + gain(r, 1) * iy;
    state = next;

    if (!cov_frozen) {
      const Eigen::MatrixXd c_before = c;
      for (int s = 0; s < eff.cov_oversample; ++s) {
        const Eigen::MatrixXd g2 = c * meas.transpose();
        c += (a * c + c * a.transpose() + d - g2 * g2.transpose()) * dt_cov;
      }
      c = 0.5 * (c + c.transpose());
      for (int i = 0; i < dim; ++i) {
        if (c(i, i) > options.divergence_factor * std::max(c_uncond(i, i), 1e-300))
          throw DivergenceDetected("filter covariance exceeded the divergence bound");
        if (!std::isfinite(c(i, i)))
          throw DivergenceDetected("filter covariance became non-finite");
      }
      gain = c * meas.transpose();
      if ((c - c_before).cwiseAbs().maxCoeff() < 1e-10 * c.cwiseAbs().maxCoeff()) {
        cov_frozen = true;
        out.cov_converged = true;
        out.cov_converged_sample = static_cast<long>(k) + 1;
      }
    }

    if (options.store_means_every > 0 && k % options.store_means_every == 0)
      out.means.push_back(state);
  }
  take_snapshots(n);
  out.steady_cov = c;

  if (reversed) {
    // map the run back to forward time
    std::reverse(out.means.begin(), out.means.end());
    std::reverse(out.innovations.begin(), out.innovations.end());
  }
  return out;
}

}  // namespace

FilterRun filter_predict(const MeasurementRecord& record, const FilterModel& model,
                         const FilterOptions& options) {
  return run_filter(record, model, options, /*reversed=*/false);
}

FilterRun filter_retrodict(const MeasurementRecord& record, const FilterModel& model,
                           const FilterOptions& options) {
  return run_filter(record, model, options, /*reversed=*/true);
}

Eigen::MatrixXd unconditional_covariance(const FilterModel& model) {
  model.validate();
  return lyapunov_fixed_point(model.drift(), model.diffusion());
}

Eigen::MatrixXd steady_state_covariance(const FilterModel& model) {
  model.validate();
  const Eigen::MatrixXd c0 = lyapunov_fixed_point(model.drift(), model.diffusion());
  return riccati_fixed_point(model.drift(), model.diffusion(), model.measurement(),
                             model.dt / model.cov_oversample, c0);
}

double steady_state_single_mode(double gamma_eff, double gamma_th, double gamma_qba,
                                double gamma_meas) {
  if (!(gamma_meas > 0.0))
    throw InvalidParams("steady_state_single_mode: gamma_meas must be positive");
  const double dec = gamma_th + gamma_qba;
  return (-gamma_eff + std::sqrt(gamma_eff * gamma_eff + 16.0 * gamma_meas * dec)) /
         (8.0 * gamma_meas);
}

double purity(double occupancy) {
  if (occupancy < 0.0) throw InvalidParams("purity: occupancy must be nonnegative");
  return 1.0 / (2.0 * occupancy + 1.0);
}

std::complex<double> feedback_cancellation_filter(const SystemParams& params, double /*omega*/) {
  const double eta = params.eta_d;
  const double ka = params.cavity.kappa_out;
  if (!(eta > 0.0) || !(ka > 0.0))
    throw InvalidParams("feedback_cancellation_filter: eta and kappa_out must be positive");
  return {-2.0 * params.coupling.g / std::sqrt(eta * ka), 0.0};
}

ReconstructionResult reconstruct_covariance(const FilterRun& pred, const FilterRun& retro) {
  if (pred.states.size() != retro.states.size())
    throw InvalidParams("reconstruct_covariance: instant grids differ");
  const int n_slices = static_cast<int>(pred.states.size());
  if (n_slices < 100)
    throw InsufficientSlices("reconstruct_covariance: need at least 100 independent slices");
  const int dim = static_cast<int>(pred.states.front().mean.size());

  ReconstructionResult res;
  res.n_slices = n_slices;
  res.cov = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < n_slices; ++k) {
    if (std::abs(pred.states[k].t - retro.states[k].t) > 1e-9)
      throw InvalidParams("reconstruct_covariance: misaligned conditioning instants");
    const Eigen::VectorXd d = retro.states[k].mean - pred.states[k].mean;
    const Eigen::MatrixXd outer = 0.5 * d * d.transpose();
    res.cov += outer;
    second += outer.cwiseProduct(outer);
  }
  res.cov /= n_slices;
  second /= n_slices;
  res.std_error = ((second - res.cov.cwiseProduct(res.cov)) / std::max(n_slices - 1, 1))
                      .cwiseMax(0.0)
                      .cwiseSqrt();

  res.mean_square_difference.assign(dim / 2, 0.0);
  for (int i = 0; i < dim / 2; ++i)
    res.mean_square_difference[i] = 2.0 * (res.cov(2 * i, 2 * i) + res.cov(2 * i + 1, 2 * i + 1));

  // degenerate-case detection: without measurement information both filters
  // stay at zero mean and nothing was conditioned
  double total_diff = 0.0;
  for (double v : res.mean_square_difference) total_diff += v;
  const double uncond = pred.unconditional_diag.size() ? pred.unconditional_diag.sum() : 1.0;
  res.conditioned = total_diff > 1e-12 * uncond;
  return res;
}

CoupledOccupancies coupled_vs_decoupled_occupancy(const SystemParams& params) {
  CoupledOccupancies r;
  SpectrumModel full{SpectrumModel::Kind::mechanical_position, params, {}};
  r.n_full = occupancy_from_spectrum(full).occupancy;
  SpectrumModel dec = full;
  dec.options.s_dd = [](double) { return 0.0; };
  r.n_decoupled = occupancy_from_spectrum(dec).occupancy;
  return r;
}

FilterModel filter_model_from_params(const SystemParams& params, double sample_rate) {
  params.validate();
  const DerivedRates rates = derived_rates(params);
  FilterModel fm;
  fm.dt = 1.0 / sample_rate;
  const double om0 = params.defect().omega_m;
  for (const auto& mode : params.modes) {
    ModeRates mr;
    mr.offset = mode.omega_m - om0;
    mr.gamma_m = mode.gamma_m;
    mr.gamma_opt = mode.gamma_opt;
    mr.gamma_th = mode.n_th * mode.gamma_m;
    const double w2 = mode.coupling_weight * mode.coupling_weight;
    mr.gamma_qba = rates.gamma_qba * w2;
    mr.gamma_meas = rates.gamma_meas * w2;
    fm.modes.push_back(mr);
  }
  return fm;
}

}  // namespace omtk
