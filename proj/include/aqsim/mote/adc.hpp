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

#include <cmath>
#include <stdexcept>

namespace aqsim {

// 12-bit ADC with an internal 3300 mV reference across 4096 levels and
// 8 analog input channels.
inline constexpr int kAdcChannels = 8;
inline constexpr int kAdcMaxCode = 4095;
inline constexpr double kAdcReferenceMv = 3300.0;

/// Digital code -> millivolts: code * 3300 / 4095. The multiply is exact in
/// double (product < 2^53), so the result is the correctly rounded rational.
inline double adc_convert(int digital) {
  if (digital < 0 || digital > kAdcMaxCode) {
    throw std::out_of_range("adc_convert: digital code outside 0..4095");
  }
  return static_cast<double>(digital) * kAdcReferenceMv / 4095.0;
}

/// Millivolts -> digital code, clamping the analog value to the ADC input
/// range first. Inverse of adc_convert for every code.
inline int adc_quantize(double analog_mv) {
  if (analog_mv < 0.0) analog_mv = 0.0;
  if (analog_mv > kAdcReferenceMv) analog_mv = kAdcReferenceMv;
  return static_cast<int>(std::llround(analog_mv * 4095.0 / kAdcReferenceMv));
}

struct AdcReading {
  int channel = 0;
  int digital = 0;
  double millivolts = 0.0;
};

/// ADC channel assignment for the two gas sensors: channels 1/2 carry the
/// NO2 working/auxiliary electrodes, channels 4/5 the O3 pair.
struct SensorChannelMap {
  int no2_we = 1;
  int no2_ae = 2;
  int o3_we = 4;
  int o3_ae = 5;

  bool valid() const {
    const int c[4] = {no2_we, no2_ae, o3_we, o3_ae};
    for (int i = 0; i < 4; ++i) {
      if (c[i] < 0 || c[i] >= kAdcChannels) return false;
      for (int j = i + 1; j < 4; ++j) {
        if (c[i] == c[j]) return false;
      }
    }
    return true;
  }
};

}  // namespace aqsim
