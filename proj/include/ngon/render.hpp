#pragma once

#include "ngon/simulator.hpp"

#include <filesystem>

namespace ngon {

/// Writes one SVG per recorded round (frame_000000.svg, ...) into
/// out_dir, keeping every `every`-th round plus the final one.  A trace
/// with no rounds yields a single frame of the initial configuration.
/// Returns the number of frames written.
int render_trace(const Trace& trace, const std::filesystem::path& out_dir, int every = 1);

}  // namespace ngon
