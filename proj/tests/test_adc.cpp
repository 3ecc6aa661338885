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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "aqsim/mote/adc.hpp"

namespace aqsim {
namespace {

TEST_CASE("known codes convert to known millivolts") {
  REQUIRE(adc_convert(0) == 0.0);
  REQUIRE(adc_convert(4095) == 3300.0);
  // 2048 * 3300 / 4095 = 1650.402930402930...
  REQUIRE(adc_convert(2048) == Catch::Approx(1650.4029304029304).epsilon(0.0).margin(1e-9));
  // 1 * 3300 / 4095 = 0.805860805860...
  REQUIRE(adc_convert(1) == Catch::Approx(0.8058608058608059).epsilon(0.0).margin(1e-9));
}

TEST_CASE("conversion matches the exact rational for every code") {
  for (int code = 0; code <= kAdcMaxCode; ++code) {
    const long double exact =
        static_cast<long double>(code) * 3300.0L / 4095.0L;
    REQUIRE(std::abs(static_cast<long double>(adc_convert(code)) - exact) <
            1e-9L);
  }
}

TEST_CASE("quantize inverts convert over the full range") {
  for (int code = 0; code <= kAdcMaxCode; ++code) {
    REQUIRE(adc_quantize(adc_convert(code)) == code);
  }
}

TEST_CASE("quantize clamps out-of-range voltages") {
  REQUIRE(adc_quantize(-1.0) == 0);
  REQUIRE(adc_quantize(-1e9) == 0);
  REQUIRE(adc_quantize(3300.0) == kAdcMaxCode);
  REQUIRE(adc_quantize(3300.1) == kAdcMaxCode);
  REQUIRE(adc_quantize(1e9) == kAdcMaxCode);
}

TEST_CASE("quantize rounds to the nearest code") {
  // Half a code step is 3300 / 4095 / 2 = 0.40293... mV.
  const double step = 3300.0 / 4095.0;
  REQUIRE(adc_quantize(step * 0.49) == 0);
  REQUIRE(adc_quantize(step * 0.51) == 1);
  REQUIRE(adc_quantize(step * 1000.2) == 1000);
}

TEST_CASE("convert rejects codes outside the 12-bit range") {
  REQUIRE_THROWS_AS(adc_convert(-1), std::out_of_range);
  REQUIRE_THROWS_AS(adc_convert(4096), std::out_of_range);
}

TEST_CASE("default channel map is valid and uses the documented channels") {
  SensorChannelMap map;
  REQUIRE(map.valid());
  REQUIRE(map.no2_we == 1);
  REQUIRE(map.no2_ae == 2);
  REQUIRE(map.o3_we == 4);
  REQUIRE(map.o3_ae == 5);
}

TEST_CASE("channel maps with collisions or bad channels are invalid") {
  SensorChannelMap dup;
  dup.o3_ae = dup.no2_we;
  REQUIRE_FALSE(dup.valid());

  SensorChannelMap high;
  high.o3_we = kAdcChannels;
  REQUIRE_FALSE(high.valid());

  SensorChannelMap negative;
  negative.no2_ae = -1;
  REQUIRE_FALSE(negative.valid());
}

}  // namespace
}  // namespace aqsim
