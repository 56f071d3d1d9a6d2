#include "cooprad/histogram_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "cooprad/errors.hpp"

namespace cooprad {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Splits CSV text into lines, routing `# key = value` metadata into a map.
/// Returns data rows with their byte offsets.
struct CsvDoc {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, std::size_t>> rows;
};

CsvDoc parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CsvDoc doc;
  std::size_t offset = 0;
  while (offset < text.size()) {
    const std::size_t eol = text.find('\n', offset);
    const std::size_t len = (eol == std::string::npos ? text.size() : eol) - offset;
    std::string line = text.substr(offset, len);
    const std::size_t line_offset = offset;
    offset += len + (eol == std::string::npos ? 0 : 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) continue;  // free-form comment
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t#");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      doc.meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      continue;
    }
    if (line.compare(0, 13, "bin_center_ps") == 0) continue;  // column header
    doc.rows.emplace_back(line, line_offset);
  }
  return doc;
}

std::int64_t meta_int(const CsvDoc& doc, const char* key) {
  auto it = doc.meta.find(key);
  if (it == doc.meta.end())
    throw ParseError(std::string("missing metadata key '") + key + "'", 0);
  char* end = nullptr;
  const long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw ParseError(std::string("non-integer metadata value for '") + key + "'", 0);
  return v;
}

double meta_double(const CsvDoc& doc, const char* key) {
  auto it = doc.meta.find(key);
  if (it == doc.meta.end())
    throw ParseError(std::string("missing metadata key '") + key + "'", 0);
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str())
    throw ParseError(std::string("non-numeric metadata value for '") + key + "'", 0);
  return v;
}

bool has_meta(const CsvDoc& doc, const char* key) { return doc.meta.count(key) != 0; }

}  // namespace

void write_correlation_csv(std::ostream& out, const CorrelationHistogram& hist) {
  out << "# correlation_histogram v1\n";
  out << "# bin_width_ps = " << hist.bin_width_ps << "\n";
  out << "# max_delay_ps = " << hist.max_delay_ps << "\n";
  out << "# ch_a = " << hist.ch_a << "\n";
  out << "# ch_b = " << hist.ch_b << "\n";
  out << "# counts_ch_a = " << hist.counts_ch_a << "\n";
  out << "# counts_ch_b = " << hist.counts_ch_b << "\n";
  if (hist.normalization) {
    const auto& n = *hist.normalization;
    out << "# rep_period_ps = " << n.rep_period_ps << "\n";
    out << "# n_side_peaks = " << n.n_side_peaks << "\n";
    out << "# central_peak_counts = " << fmt_g(n.central_peak_counts) << "\n";
    out << "# mean_side_peak_counts = " << fmt_g(n.mean_side_peak_counts) << "\n";
    out << "# g2_zero = " << fmt_g(hist.g2_zero) << "\n";
    out << "# g2_zero_sigma = " << fmt_g(hist.g2_zero_sigma) << "\n";
    out << "# g2_zero_pointwise = " << fmt_g(hist.g2_zero_pointwise) << "\n";
    out << "# g2_zero_pointwise_sigma = " << fmt_g(hist.g2_zero_pointwise_sigma) << "\n";
  }
  const bool with_curve = !hist.g2_curve.empty();
  out << (with_curve ? "bin_center_ps,counts,g2\n" : "bin_center_ps,counts\n");
  for (int k = 0; k < hist.n_bins(); ++k) {
    out << hist.bin_center_ps(k) << ',' << hist.counts[k];
    if (with_curve) out << ',' << fmt_g(hist.g2_curve[k]);
    out << '\n';
  }
  if (!out) throw IoError("failed writing correlation histogram");
}

void write_correlation_csv_file(const std::string& path, const CorrelationHistogram& hist) {
  std::ofstream out(path, std::ios::binary);  // binary: keep \n exact
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_correlation_csv(out, hist);
}

CorrelationHistogram read_correlation_csv(std::istream& in) {
  const CsvDoc doc = parse_csv(in);
  CorrelationHistogram hist;
  hist.bin_width_ps = meta_int(doc, "bin_width_ps");
  hist.max_delay_ps = meta_int(doc, "max_delay_ps");
  hist.ch_a = static_cast<int>(meta_int(doc, "ch_a"));
  hist.ch_b = static_cast<int>(meta_int(doc, "ch_b"));
  hist.counts_ch_a = meta_int(doc, "counts_ch_a");
  hist.counts_ch_b = meta_int(doc, "counts_ch_b");
  if (has_meta(doc, "g2_zero")) {
    CorrelationHistogram::Normalization n;
    n.rep_period_ps = meta_int(doc, "rep_period_ps");
    n.n_side_peaks = static_cast<int>(meta_int(doc, "n_side_peaks"));
    n.central_peak_counts = meta_double(doc, "central_peak_counts");
    n.mean_side_peak_counts = meta_double(doc, "mean_side_peak_counts");
    hist.normalization = n;
    hist.g2_zero = meta_double(doc, "g2_zero");
    hist.g2_zero_sigma = meta_double(doc, "g2_zero_sigma");
    hist.g2_zero_pointwise = meta_double(doc, "g2_zero_pointwise");
    hist.g2_zero_pointwise_sigma = meta_double(doc, "g2_zero_pointwise_sigma");
  }
  for (const auto& [line, offset] : doc.rows) {
    char* end = nullptr;
    std::strtoll(line.c_str(), &end, 10);  // bin center: implied by index
    if (*end != ',') throw ParseError("malformed histogram row", offset);
    const char* p = end + 1;
    const long long c = std::strtoll(p, &end, 10);
    if (end == p) throw ParseError("malformed histogram row", offset);
    hist.counts.push_back(c);
    if (*end == ',') {
      p = end + 1;
      const double g = std::strtod(p, &end);
      if (end == p) throw ParseError("malformed g2 value", offset);
      hist.g2_curve.push_back(g);
    }
  }
  if (!hist.g2_curve.empty() && hist.g2_curve.size() != hist.counts.size())
    throw ParseError("g2 column is incomplete", 0);
  if (hist.counts.empty() || hist.counts.size() % 2 == 0)
    throw ParseError("correlation histogram needs an odd number of bins", 0);
  return hist;
}

CorrelationHistogram read_correlation_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open correlation histogram " + path);
  return read_correlation_csv(in);
}

void write_lifetime_csv(std::ostream& out, const LifetimeHistogram& hist) {
  out << "# lifetime_histogram v1\n";
  out << "# bin_width_ps = " << hist.bin_width_ps << "\n";
  out << "# sync_count = " << hist.sync_count << "\n";
  out << "# skipped_tags = " << hist.skipped_tags << "\n";
  out << "bin_center_ps,counts\n";
  for (int k = 0; k < hist.n_bins(); ++k)
    out << hist.bin_center_ps(k) << ',' << hist.counts[k] << '\n';
  if (!out) throw IoError("failed writing lifetime histogram");
}

void write_lifetime_csv_file(const std::string& path, const LifetimeHistogram& hist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_lifetime_csv(out, hist);
}

LifetimeHistogram read_lifetime_csv(std::istream& in) {
  const CsvDoc doc = parse_csv(in);
  LifetimeHistogram hist;
  hist.bin_width_ps = meta_int(doc, "bin_width_ps");
  hist.sync_count = meta_int(doc, "sync_count");
  hist.skipped_tags = meta_int(doc, "skipped_tags");
  for (const auto& [line, offset] : doc.rows) {
    char* end = nullptr;
    std::strtoll(line.c_str(), &end, 10);
    if (*end != ',') throw ParseError("malformed histogram row", offset);
    const char* p = end + 1;
    const long long c = std::strtoll(p, &end, 10);
    if (end == p) throw ParseError("malformed histogram row", offset);
    hist.counts.push_back(c);
  }
  return hist;
}

LifetimeHistogram read_lifetime_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lifetime histogram " + path);
  return read_lifetime_csv(in);
}

void write_raster_csv_file(const std::string& path, const Eigen::MatrixXd& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (Eigen::Index r = 0; r < raster.rows(); ++r) {
    for (Eigen::Index c = 0; c < raster.cols(); ++c) {
      if (c) out << ',';
      out << fmt_g(raster(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

Eigen::MatrixXd read_raster_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open raster " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    const char* p = line.c_str();
    char* end = nullptr;
    for (;;) {
      const double v = std::strtod(p, &end);
      if (end == p) throw ParseError("malformed raster row", line_offset);
      row.push_back(v);
      if (*end == ',') { p = end + 1; continue; }
      if (*end == '\0') break;
      throw ParseError("malformed raster row", line_offset);
    }
    if (!rows.empty() && rows.front().size() != row.size())
      throw ParseError("ragged raster rows", line_offset);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("raster file has no data rows", 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows.front().size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

}  // namespace cooprad
