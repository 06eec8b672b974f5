#pragma once

#include <string>
#include <vector>

#include "oseen/field.hpp"

namespace oseen {

/// One frame of saved state: time plus 1 (scalar) or 2 (vector) components.
struct Snapshot {
    double time = 0.0;
    Grid grid;
    std::vector<ScalarField> components;
};

/// Binary frame format: magic "NSF2", u32 point count per side, f64 half
/// width, f64 time, u32 component count, then each component as row-major
/// f64, all little-endian.
void write_snapshot(const std::string& path, const Snapshot& snap);

/// Reads a frame; a short or malformed file reports the failing byte offset.
/// The grid's ball radius is not stored and defaults to half_width/4.
Snapshot read_snapshot(const std::string& path);

/// CSV slice along x at fixed iy: header "x,value", one row per node.
void write_csv_slice(const std::string& path, const ScalarField& f, int iy);

} // namespace oseen
