#pragma once

// CSV persistence. Numbers are written with 17 significant digits, '.' as the
// decimal separator and LF line endings, so files round-trip bit for bit.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "expdiff/diffeo.hpp"
#include "expdiff/expmap.hpp"
#include "expdiff/geodesic.hpp"
#include "expdiff/spectral.hpp"

namespace expdiff::io {

std::string format_double(double value);

void write_field(std::ostream& os, const Field& f);          ///< x,value
void write_spectrum(std::ostream& os, const Field& f);       ///< n,re,im for n = 0..N/2
void write_diffeo(std::ostream& os, const Diffeo& phi);      ///< x,phi (lift values)
void write_monitors(std::ostream& os, const std::vector<MonitorSample>& samples);
void write_newton_trace(std::ostream& os, const std::vector<NewtonRecord>& trace);

Field read_field(std::istream& is);
Diffeo read_diffeo(std::istream& is, double slope_floor = kDefaultSlopeFloor);

void save_field(const std::filesystem::path& path, const Field& f);
void save_spectrum(const std::filesystem::path& path, const Field& f);
void save_diffeo(const std::filesystem::path& path, const Diffeo& phi);
void save_monitors(const std::filesystem::path& path, const std::vector<MonitorSample>& samples);
void save_newton_trace(const std::filesystem::path& path, const std::vector<NewtonRecord>& trace);

Field load_field(const std::filesystem::path& path);
Diffeo load_diffeo(const std::filesystem::path& path, double slope_floor = kDefaultSlopeFloor);

}  // namespace expdiff::io
