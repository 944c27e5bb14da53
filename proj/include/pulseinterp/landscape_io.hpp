#pragma once

#include <iosfwd>
#include <string>

#include "pulseinterp/calib.hpp"

namespace pulseinterp {

inline constexpr const char* kLandscapeVersion = "pulseinterp.landscape.v1";

/// JSON text of a landscape. Doubles are written in shortest round-trip form, so
/// loading reproduces every pulse amplitude and vertex coordinate exactly.
std::string landscape_to_json(const Landscape& landscape);

/// Throws FormatError on malformed input, a missing field or a version mismatch.
Landscape landscape_from_json(const std::string& text);

/// Throws IoError when the file cannot be written or read.
void save_landscape(const Landscape& landscape, const std::string& path);
Landscape load_landscape(const std::string& path);

}  // namespace pulseinterp
