#include "cooprad/timetag.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "cooprad/errors.hpp"

namespace cooprad {

namespace {

constexpr char kMagic[4] = {'T', 'T', 'G', '1'};

void put_u16(unsigned char* p, std::uint16_t v) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
}

void put_u64(unsigned char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::int64_t get_i64(const unsigned char* p) {
  return static_cast<std::int64_t>(get_u64(p));
}

bool tag_order_ok(const TimeTagRecord& prev, const TimeTagRecord& cur) {
  return cur.timestamp_ps > prev.timestamp_ps ||
         (cur.timestamp_ps == prev.timestamp_ps && cur.channel >= prev.channel);
}

void check_invariants(const std::vector<TimeTagRecord>& records, bool from_reader) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].channel > kMaxDetectorChannel)
      throw ValidationError("record " + std::to_string(i) + " has channel " +
                            std::to_string(records[i].channel) +
                            " beyond the detector range");
    if (i > 0 && !tag_order_ok(records[i - 1], records[i]))
      throw ValidationError(std::string(from_reader ? "stream" : "input") +
                            " records out of order at index " + std::to_string(i));
  }
}

}  // namespace

void write_timetags(std::ostream& out, const std::vector<TimeTagRecord>& records) {
  check_invariants(records, false);
  unsigned char header[kTtgHeaderBytes];
  std::memcpy(header, kMagic, 4);
  put_u16(header + 4, 1);   // version
  put_u16(header + 6, 0);   // reserved
  put_u64(header + 8, 1000);  // time unit: 1000 fs = 1 ps
  put_u64(header + 16, records.size());
  out.write(reinterpret_cast<const char*>(header), sizeof header);

  // buffered record serialization; 9 bytes each, no padding
  std::vector<unsigned char> buf;
  buf.resize(std::min<std::size_t>(records.size(), 1 << 16) * kTtgRecordBytes);
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t n = std::min<std::size_t>(records.size() - i, 1 << 16);
    for (std::size_t j = 0; j < n; ++j) {
      unsigned char* p = buf.data() + j * kTtgRecordBytes;
      p[0] = records[i + j].channel;
      put_u64(p + 1, static_cast<std::uint64_t>(records[i + j].timestamp_ps));
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(n * kTtgRecordBytes));
    i += n;
  }
  if (!out) throw IoError("failed writing tag stream");
}

void write_timetag_file(const std::string& path, const std::vector<TimeTagRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_timetags(out, records);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<TimeTagRecord> read_timetags(std::istream& in, TimeTagHeader* header_out) {
  unsigned char header[kTtgHeaderBytes];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  const std::size_t got = static_cast<std::size_t>(in.gcount());
  if (got < kTtgHeaderBytes)
    throw ParseError("truncated header: expected 24 bytes, found " + std::to_string(got),
                     got);
  if (std::memcmp(header, kMagic, 4) != 0) throw ParseError("bad magic, expected TTG1", 0);
  TimeTagHeader h;
  h.version = get_u16(header + 4);
  if (h.version != 1)
    throw ParseError("unsupported version " + std::to_string(h.version), 4);
  h.time_unit_fs = get_u64(header + 8);
  if (h.time_unit_fs != 1000)
    throw ParseError("unsupported time unit " + std::to_string(h.time_unit_fs) + " fs", 8);
  h.record_count = get_u64(header + 16);

  // slurp the record section in chunks (streams are not generally seekable)
  std::string body;
  if (h.record_count <= (1ull << 32) / kTtgRecordBytes)
    body.reserve(h.record_count * kTtgRecordBytes);
  char chunk[1 << 16];
  while (in.read(chunk, sizeof chunk) || in.gcount() > 0)
    body.append(chunk, static_cast<std::size_t>(in.gcount()));

  if (body.size() % kTtgRecordBytes != 0)
    throw ParseError("truncated record: " + std::to_string(body.size() % kTtgRecordBytes) +
                         " stray trailing bytes",
                     kTtgHeaderBytes + (body.size() / kTtgRecordBytes) * kTtgRecordBytes);
  const std::uint64_t found = body.size() / kTtgRecordBytes;
  if (found != h.record_count)
    throw ParseError("record count mismatch: header declares " +
                         std::to_string(h.record_count) + " records, stream contains " +
                         std::to_string(found),
                     16);

  std::vector<TimeTagRecord> records(found);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(body.data());
  for (std::uint64_t i = 0; i < found; ++i, p += kTtgRecordBytes) {
    records[i].channel = p[0];
    records[i].timestamp_ps = get_i64(p + 1);
  }
  check_invariants(records, true);
  if (header_out) *header_out = h;
  return records;
}

std::vector<TimeTagRecord> read_timetag_file(const std::string& path, TimeTagHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tag stream " + path);
  return read_timetags(in, header);
}

std::vector<TimeTagRecord> merge_timetags(const std::vector<TimeTagRecord>& a,
                                          const std::vector<TimeTagRecord>& b) {
  std::vector<TimeTagRecord> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const TimeTagRecord& x, const TimeTagRecord& y) {
               return x.timestamp_ps < y.timestamp_ps ||
                      (x.timestamp_ps == y.timestamp_ps && x.channel < y.channel);
             });
  return out;
}

std::vector<TimeTagRecord> window_timetags(const std::vector<TimeTagRecord>& records,
                                           std::int64_t begin_ps, std::int64_t end_ps) {
  auto lo = std::partition_point(records.begin(), records.end(),
                                 [&](const TimeTagRecord& r) { return r.timestamp_ps < begin_ps; });
  auto hi = std::partition_point(lo, records.end(),
                                 [&](const TimeTagRecord& r) { return r.timestamp_ps < end_ps; });
  return std::vector<TimeTagRecord>(lo, hi);
}

}  // namespace cooprad
