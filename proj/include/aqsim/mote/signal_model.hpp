// Copyright 2026 The aqsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "aqsim/mote/adc.hpp"
#include "aqsim/sim/rng.hpp"
#include "aqsim/sim/time.hpp"

namespace aqsim {

/// Shape of one electrode's synthetic output voltage.
struct ChannelSignal {
  double baseline_mv = 225.0;
  double amplitude_mv = 50.0;
  double noise_sigma_mv = 2.0;
  double drift_mv_per_hour = 0.0;
};

/// Synthetic stand-in for the analog gas-sensor front end: a slow sinusoid
/// around a per-channel baseline with Gaussian electrode noise, clamped to
/// the ADC input range before quantization.
class GasSignalModel {
 public:
  GasSignalModel() = default;

  /// A model that holds every channel at a fixed voltage, for tests that
  /// need bit-predictable ADC codes.
  static GasSignalModel constant(double mv) {
    GasSignalModel model;
    for (auto& ch : model.channels_) {
      ch = ChannelSignal{mv, 0.0, 0.0, 0.0};
    }
    return model;
  }

  ChannelSignal& channel(int index) { return channels_.at(index); }
  const ChannelSignal& channel(int index) const { return channels_.at(index); }

  void set_period(SimTime period_ms) { period_ms_ = period_ms; }

  /// Millivolt reading of `index` at virtual time `now`. Noise draws come
  /// from the caller's stream; a zero-sigma channel draws nothing, so quiet
  /// configurations do not perturb the stream.
  double sample(int index, SimTime now, RngStream& rng) const {
    const ChannelSignal& ch = channels_.at(index);
    const double t = static_cast<double>(now);
    const double phase =
        2.0 * kPi * t / static_cast<double>(period_ms_) + index * kPi / 4.0;
    double mv = ch.baseline_mv + ch.amplitude_mv * std::sin(phase) +
                ch.drift_mv_per_hour * (t / static_cast<double>(kHour));
    if (ch.noise_sigma_mv > 0.0) {
      mv += rng.gaussian(0.0, ch.noise_sigma_mv);
    }
    return std::clamp(mv, 0.0, kAdcReferenceMv);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::array<ChannelSignal, kAdcChannels> channels_{};
  SimTime period_ms_ = kHour;
};

}  // namespace aqsim
