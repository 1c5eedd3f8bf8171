#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "omtk/errors.hpp"

namespace omtk {

// Uniformly sampled, demodulated two-channel photocurrent record. Channels
// are shot-noise normalized: unit-variance white noise per sample at the
// shot level, so the measurement model reads
//   i_x[k] = xi[k] + sqrt(4 gamma_meas_i dt) <X_i>(t_k),  xi ~ N(0,1).
struct MeasurementRecord {
  std::vector<double> i_x, i_y;
  double sample_rate = 0.0;      // Hz
  double demod_frequency = 0.0;  // Hz (the rotating-frame carrier)
  // optional ground truth, interleaved (X1, Y1, X2, Y2, ...) per sample
  std::vector<std::vector<double>> truth;
  std::string units = "shot";

  std::size_t size() const { return i_x.size(); }
  double dt() const { return 1.0 / sample_rate; }
  double duration() const { return static_cast<double>(size()) / sample_rate; }
  void validate() const {
    if (i_x.size() != i_y.size()) throw InvalidParams("record: channel lengths differ");
    if (!(sample_rate > 0.0)) throw InvalidParams("record: sample_rate must be positive");
  }
};

}  // namespace omtk
