#pragma once

#include <string>

#include "edlf/grid.hpp"

namespace edlf {

// Binary field format, little-endian throughout:
//   "EDLF" | u32 version | u8 target mode | f64 k | u32 nx,ny,nz | f64 h |
//   f64 origin[3] | u8 roles[nx*ny*nz] | f64 values[nx*ny*nz*3], x-fastest.
// The payload length must match the header exactly; round trips are
// bit-exact. The shape descriptor is not part of the interchange format; the
// mask travels via the role bytes (loaded domains report shape = box).
inline constexpr unsigned kFieldFileVersion = 1;

void save_field(const std::string& path, const LineFieldState& state);
LineFieldState load_field(const std::string& path);

}  // namespace edlf
