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

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "aqsim/mote/sample.hpp"
#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/time.hpp"
#include "aqsim/util/bytes.hpp"

namespace aqsim {

/// Append-only on-disk record log plus a separate ack log, so no entry is
/// ever rewritten in place. Each journal entry is 30 bytes:
/// [mote_id: 2 BE][receive_time_ms: 8 BE][20-byte sample wire image].
/// The ack log is a flat sequence of 8-byte big-endian journal offsets.
/// Opening a directory with existing logs reloads them, which is the
/// restart/recovery path.
class Journal {
 public:
  static constexpr std::size_t kEntrySize = 2 + 8 + kSampleWireSize;

  struct Entry {
    std::uint64_t offset = 0;
    NodeId mote_id = 0;
    SimTime receive_time_ms = 0;
    std::array<std::uint8_t, kSampleWireSize> wire{};
    bool acked = false;
  };

  explicit Journal(const std::filesystem::path& dir)
      : journal_path_(dir / "journal.bin"), ack_path_(dir / "journal.ack") {
    std::filesystem::create_directories(dir);
    load();
    journal_out_.open(journal_path_, std::ios::binary | std::ios::app);
    ack_out_.open(ack_path_, std::ios::binary | std::ios::app);
    if (!journal_out_ || !ack_out_) {
      throw std::runtime_error("journal: cannot open log files in " +
                               dir.string());
    }
  }

  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  /// Durably appends one record; returns its journal offset.
  std::uint64_t append(NodeId mote_id, SimTime receive_time_ms,
                       const std::array<std::uint8_t, kSampleWireSize>& wire) {
    Entry entry;
    entry.offset = entries_.size() * kEntrySize;
    entry.mote_id = mote_id;
    entry.receive_time_ms = receive_time_ms;
    entry.wire = wire;

    std::vector<std::uint8_t> bytes;
    bytes.reserve(kEntrySize);
    put_u16_be(bytes, mote_id);
    put_u64_be(bytes, receive_time_ms);
    bytes.insert(bytes.end(), wire.begin(), wire.end());
    journal_out_.write(reinterpret_cast<const char*>(bytes.data()),
                       static_cast<std::streamsize>(bytes.size()));
    journal_out_.flush();
    if (!journal_out_) throw std::runtime_error("journal: append failed");

    entries_.push_back(entry);
    return entry.offset;
  }

  /// Marks the entry at `offset` acknowledged. Idempotent; a second ack of
  /// the same offset writes nothing.
  void mark_acked(std::uint64_t offset) {
    Entry& entry = at_offset(offset);
    if (entry.acked) return;
    entry.acked = true;
    ++acked_count_;
    std::vector<std::uint8_t> bytes;
    put_u64_be(bytes, offset);
    ack_out_.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()));
    ack_out_.flush();
    if (!ack_out_) throw std::runtime_error("journal: ack append failed");
  }

  Entry& at_offset(std::uint64_t offset) {
    if (offset % kEntrySize != 0 || offset / kEntrySize >= entries_.size()) {
      throw std::logic_error("journal: bad offset");
    }
    return entries_[offset / kEntrySize];
  }

  const Entry& at_offset(std::uint64_t offset) const {
    return const_cast<Journal*>(this)->at_offset(offset);
  }

  /// Offsets of every unacknowledged entry, in journal (append) order.
  std::vector<std::uint64_t> unacked_offsets() const {
    std::vector<std::uint64_t> out;
    out.reserve(entries_.size() - acked_count_);
    for (const Entry& entry : entries_) {
      if (!entry.acked) out.push_back(entry.offset);
    }
    return out;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t entry_count() const { return entries_.size(); }
  std::uint64_t acked_count() const { return acked_count_; }
  std::uint64_t unacked_count() const { return entries_.size() - acked_count_; }
  std::uint64_t size_bytes() const { return entries_.size() * kEntrySize; }
  const std::filesystem::path& journal_path() const { return journal_path_; }

 private:
  void load() {
    std::ifstream in(journal_path_, std::ios::binary);
    if (in) {
      std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
      in.close();
      const std::size_t whole = buf.size() / kEntrySize;  // drop torn tail
      if (buf.size() % kEntrySize != 0) {
        std::filesystem::resize_file(journal_path_, whole * kEntrySize);
      }
      for (std::size_t i = 0; i < whole; ++i) {
        const auto* p =
            reinterpret_cast<const std::uint8_t*>(buf.data()) + i * kEntrySize;
        Entry entry;
        entry.offset = i * kEntrySize;
        entry.mote_id = get_u16_be(p);
        entry.receive_time_ms = get_u64_be(p + 2);
        std::copy(p + 10, p + 10 + kSampleWireSize, entry.wire.begin());
        entries_.push_back(entry);
      }
    }
    std::ifstream ack_in(ack_path_, std::ios::binary);
    if (ack_in) {
      std::vector<char> buf((std::istreambuf_iterator<char>(ack_in)),
                            std::istreambuf_iterator<char>());
      ack_in.close();
      const std::size_t whole = buf.size() / 8;
      if (buf.size() % 8 != 0) {
        std::filesystem::resize_file(ack_path_, whole * 8);
      }
      for (std::size_t i = 0; i < whole; ++i) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(buf.data()) + i * 8;
        const std::uint64_t offset = get_u64_be(p);
        Entry& entry = at_offset(offset);
        if (!entry.acked) {
          entry.acked = true;
          ++acked_count_;
        }
      }
    }
  }

  std::filesystem::path journal_path_;
  std::filesystem::path ack_path_;
  std::ofstream journal_out_;
  std::ofstream ack_out_;
  std::vector<Entry> entries_;
  std::uint64_t acked_count_ = 0;
};

}  // namespace aqsim
