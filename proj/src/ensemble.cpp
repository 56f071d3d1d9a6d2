#include "cooprad/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cooprad/errors.hpp"

namespace cooprad {

double EmitterEnsemble::wavenumber_per_nm() const { return 2.0 * M_PI / wavelength_nm; }

void EmitterEnsemble::validate() const {
  if (positions_nm.empty()) throw ValidationError("ensemble has no emitters");
  if (dipoles.size() != positions_nm.size())
    throw ValidationError("ensemble has " + std::to_string(positions_nm.size()) +
                          " positions but " + std::to_string(dipoles.size()) + " dipoles");
  if (!(wavelength_nm > 0.0)) throw ValidationError("wavelength must be positive");
  if (!(gamma0_per_ns > 0.0)) throw ValidationError("single-emitter rate must be positive");
  for (std::size_t i = 0; i < dipoles.size(); ++i) {
    if (std::abs(dipoles[i].norm() - 1.0) > 1e-6)
      throw ValidationError("dipole " + std::to_string(i) + " is not unit length");
  }
}

EmitterEnsemble dicke_cluster(int n, double wavelength_nm, double gamma0_per_ns) {
  if (n < 1) throw ValidationError("ensemble needs at least one emitter");
  EmitterEnsemble e;
  e.wavelength_nm = wavelength_nm;
  e.gamma0_per_ns = gamma0_per_ns;
  e.positions_nm.assign(n, Eigen::Vector3d::Zero());
  e.dipoles.assign(n, Eigen::Vector3d::UnitZ());
  e.validate();
  return e;
}

EmitterEnsemble line_ensemble(int n, double spacing_nm, double wavelength_nm,
                              double gamma0_per_ns) {
  if (n < 1) throw ValidationError("ensemble needs at least one emitter");
  if (!(spacing_nm > 0.0)) throw ValidationError("spacing must be positive");
  EmitterEnsemble e;
  e.wavelength_nm = wavelength_nm;
  e.gamma0_per_ns = gamma0_per_ns;
  for (int i = 0; i < n; ++i) {
    e.positions_nm.emplace_back(i * spacing_nm, 0.0, 0.0);
    e.dipoles.emplace_back(Eigen::Vector3d::UnitZ());
  }
  e.validate();
  return e;
}

EmitterEnsemble read_ensemble(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EmitterEnsemble e;
  std::size_t offset = 0;
  bool have_header = false;
  while (offset < text.size()) {
    const std::size_t eol = text.find('\n', offset);
    const std::size_t len = (eol == std::string::npos ? text.size() : eol) - offset;
    const std::string line = text.substr(offset, len);
    const std::size_t line_offset = offset;
    offset += len + (eol == std::string::npos ? 0 : 1);

    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    if (!have_header) {
      double wl = 0.0, g0 = 0.0;
      if (std::sscanf(line.c_str(), " wavelength_nm=%lf gamma0_per_ns=%lf", &wl, &g0) != 2)
        throw ParseError("malformed geometry header, expected "
                         "'wavelength_nm=<v> gamma0_per_ns=<v>'", line_offset);
      e.wavelength_nm = wl;
      e.gamma0_per_ns = g0;
      have_header = true;
      continue;
    }
    double x, y, z, dx, dy, dz;
    if (std::sscanf(line.c_str(), " %lf %lf %lf %lf %lf %lf", &x, &y, &z, &dx, &dy, &dz) != 6)
      throw ParseError("malformed emitter row, expected 'x y z dx dy dz'", line_offset);
    e.positions_nm.emplace_back(x, y, z);
    e.dipoles.emplace_back(dx, dy, dz);
  }
  if (!have_header) throw ParseError("geometry file has no header line", 0);
  e.validate();
  return e;
}

EmitterEnsemble read_ensemble_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open geometry file " + path);
  return read_ensemble(in);
}

void write_ensemble(const EmitterEnsemble& e, std::ostream& out) {
  e.validate();
  char buf[256];
  std::snprintf(buf, sizeof buf, "wavelength_nm=%.17g gamma0_per_ns=%.17g\n",
                e.wavelength_nm, e.gamma0_per_ns);
  out << buf;
  for (int i = 0; i < e.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n",
                  e.positions_nm[i].x(), e.positions_nm[i].y(), e.positions_nm[i].z(),
                  e.dipoles[i].x(), e.dipoles[i].y(), e.dipoles[i].z());
    out << buf;
  }
  if (!out) throw IoError("failed writing geometry stream");
}

void write_ensemble_file(const EmitterEnsemble& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_ensemble(e, out);
}

}  // namespace cooprad
