#pragma once

#include <cstdint>
#include <vector>

#include "omtk/params.hpp"
#include "omtk/record.hpp"
#include "omtk/tin.hpp"

namespace omtk {

struct ToneSpec {
  double frequency_hz = 0.0;  // absolute (lab-frame) modulation frequency
  double depth = 0.0;         // phase modulation depth
};

struct TrajectoryConfig {
  SystemParams params;
  double dt = 0.0;        // integrator step = record sample interval, s
  double duration = 0.0;  // s
  std::uint64_t seed = 1;
  bool record_truth = false;
  int truth_decimation = 1;
  std::vector<ToneSpec> tones;
  // Shared-stream backaction-imprecision correlation (ponderomotive
  // correlation); weight follows from theta. Off: naive uncorrelated record.
  bool ponderomotive_correlation = false;
  std::size_t memory_cap_samples = 400000000;

  void validate() const;
};

// Generate a demodulated two-channel photocurrent record with per-mode truth
// trajectories evolved in the Omega_m rotating frame.
MeasurementRecord simulate(const TrajectoryConfig& config);

// Classical intracavity intensity |a(t)|^2 under a detuning-noise drive.
struct ClassicalCavityResult {
  std::vector<double> intensity;  // |a|^2, per input-photon-flux units
  double dt = 0.0;
  double steady_state_intensity = 0.0;  // analytic, for the applied drive
};
ClassicalCavityResult simulate_classical_cavity(const DetuningNoiseTrace& trace,
                                                const CavityMode& cav, double drive_amplitude);

}  // namespace omtk
