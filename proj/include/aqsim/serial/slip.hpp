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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace aqsim {

// RFC 1055 framing constants.
inline constexpr std::uint8_t kSlipEnd = 0xC0;
inline constexpr std::uint8_t kSlipEsc = 0xDB;
inline constexpr std::uint8_t kSlipEscEnd = 0xDC;
inline constexpr std::uint8_t kSlipEscEsc = 0xDD;

/// Frames a payload as END, stuffed payload, END. The leading END flushes any
/// line noise ahead of the frame, matching tunslip behaviour.
inline std::vector<std::uint8_t> slip_encode(std::span<const std::uint8_t> payload) {
  if (payload.empty()) {
    throw std::invalid_argument("slip_encode: empty payload");
  }
  std::vector<std::uint8_t> out;
  out.reserve(payload.size() + 2);
  out.push_back(kSlipEnd);
  for (std::uint8_t byte : payload) {
    if (byte == kSlipEnd) {
      out.push_back(kSlipEsc);
      out.push_back(kSlipEscEnd);
    } else if (byte == kSlipEsc) {
      out.push_back(kSlipEsc);
      out.push_back(kSlipEscEsc);
    } else {
      out.push_back(byte);
    }
  }
  out.push_back(kSlipEnd);
  return out;
}

/// Incremental SLIP decoder. The input stream may be split at arbitrary byte
/// boundaries across feed() calls; decoder state carries over. An invalid
/// escape sequence poisons the current frame: it is discarded, counted, and
/// decoding resynchronizes at the next END.
class SlipDecoder {
 public:
  std::vector<std::vector<std::uint8_t>> feed(std::span<const std::uint8_t> bytes) {
    std::vector<std::vector<std::uint8_t>> frames;
    for (std::uint8_t byte : bytes) {
      if (discarding_) {
        if (byte == kSlipEnd) {
          discarding_ = false;
          in_escape_ = false;
          current_.clear();
        }
        continue;
      }
      if (in_escape_) {
        in_escape_ = false;
        if (byte == kSlipEscEnd) {
          current_.push_back(kSlipEnd);
        } else if (byte == kSlipEscEsc) {
          current_.push_back(kSlipEsc);
        } else {
          ++malformed_;
          current_.clear();
          // An END right here terminates the bad frame and resyncs at once.
          if (byte != kSlipEnd) discarding_ = true;
        }
        continue;
      }
      if (byte == kSlipEnd) {
        if (!current_.empty()) {
          frames.push_back(std::move(current_));
          current_.clear();
        }
        // Empty frames (END END) are skipped.
        continue;
      }
      if (byte == kSlipEsc) {
        in_escape_ = true;
        continue;
      }
      current_.push_back(byte);
    }
    return frames;
  }

  std::size_t malformed_count() const { return malformed_; }

 private:
  std::vector<std::uint8_t> current_;
  bool in_escape_ = false;
  bool discarding_ = false;
  std::size_t malformed_ = 0;
};

}  // namespace aqsim
