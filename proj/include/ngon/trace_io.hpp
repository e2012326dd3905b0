#pragma once

#include "ngon/simulator.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace ngon {

const char* to_string(SchedulerKind k);
const char* to_string(OutcomeKind k);
SchedulerKind scheduler_from_string(const std::string& s);
Phase phase_from_string(const std::string& s);

/// Serializes a trace as JSON Lines: a header record, one record per
/// round, and an outcome record.  Parsing the result reproduces the
/// trace exactly.
std::string emit_trace(const Trace& trace);
Trace parse_trace(const std::string& text);

/// Run description read from a JSON file: parameters plus either
/// explicit positions or the generator inputs for a random start.
struct RunConfig {
  SimParams params;
  std::optional<PointSeqd> positions;
  double extent = 10.0;
  double min_sep = 0.05;
};

RunConfig parse_run_config(const std::string& text);
std::string emit_run_config(const RunConfig& config);

/// Initial positions for a run: the explicit ones, or a fresh draw from
/// the generator inputs.
PointSeqd resolve_positions(const RunConfig& config);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

}  // namespace ngon
