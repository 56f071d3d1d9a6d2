#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cooprad {

/// One detection record: channel 0 is the sync, channels 1..2 are detectors.
/// Timestamps are absolute picoseconds from the start of the run.
struct TimeTagRecord {
  std::uint8_t channel = 0;
  std::int64_t timestamp_ps = 0;

  friend bool operator==(const TimeTagRecord&, const TimeTagRecord&) = default;
};

/// Stream header for the binary tag format. On disk: magic "TTG1", u16
/// version, u16 reserved, u64 time unit in femtoseconds, u64 record count —
/// 24 bytes, little-endian, followed by 9-byte records (u8 channel, i64
/// timestamp).
struct TimeTagHeader {
  std::uint16_t version = 1;
  std::uint64_t time_unit_fs = 1000;  // 1 ps
  std::uint64_t record_count = 0;
};

inline constexpr int kMaxDetectorChannel = 2;
inline constexpr std::size_t kTtgHeaderBytes = 24;
inline constexpr std::size_t kTtgRecordBytes = 9;

/// Serializes header + records. Records must be sorted by timestamp with
/// ties broken by ascending channel; violations throw ValidationError.
void write_timetags(std::ostream& out, const std::vector<TimeTagRecord>& records);
void write_timetag_file(const std::string& path, const std::vector<TimeTagRecord>& records);

/// Parses and validates a tag stream. Bad magic/version/fields and short
/// reads throw ParseError with the offending byte offset; an out-of-order
/// stream or a channel above kMaxDetectorChannel throws ValidationError.
std::vector<TimeTagRecord> read_timetags(std::istream& in, TimeTagHeader* header = nullptr);
std::vector<TimeTagRecord> read_timetag_file(const std::string& path, TimeTagHeader* header = nullptr);

/// Linear-time sorted merge of two sorted streams (same tie-break as the
/// writer). Channels are physical, so collisions are expected, not errors.
std::vector<TimeTagRecord> merge_timetags(const std::vector<TimeTagRecord>& a,
                                          const std::vector<TimeTagRecord>& b);

/// Records with begin_ps <= timestamp < end_ps.
std::vector<TimeTagRecord> window_timetags(const std::vector<TimeTagRecord>& records,
                                           std::int64_t begin_ps, std::int64_t end_ps);

}  // namespace cooprad
