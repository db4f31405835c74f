#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qbb/harness.hpp"

namespace qbb::harness {

enum class Emit { Edges, Traces, Stats, All };
enum class Format { Csv, Json };

Emit parse_emit(const std::string& text);
Format parse_format(const std::string& text);
std::string to_string(Emit e);
std::string to_string(Format f);

/// Empty cells stand for "not defined" (no events, not reported, ...).
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal text that round-trips the double; "inf", "-inf", "nan"
/// for non-finite values.
std::string format_number(double x);

/// Tables selected by `emit`. The scenario and station tables are always
/// present; a bundle without scenarios yields no tables at all.
std::vector<Table> build_tables(const ResultBundle& bundle, Emit emit);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

/// Run description sufficient to repeat the run: full config, filter,
/// enumerated scenarios, warnings and the list of files written.
nlohmann::json build_manifest(const ResultBundle& bundle, Emit emit, Format format,
                              const std::vector<std::string>& files);

/// Recovers the inputs of a run from its manifest.
struct ManifestRun {
  ScenarioConfig config;
  std::string scenario_filter;
  Emit emit = Emit::All;
  Format format = Format::Csv;
};
bool is_manifest(const nlohmann::json& j);
ManifestRun read_manifest(const nlohmann::json& j);

/// Writes manifest.json plus one file per table into `dir` (created if
/// needed). Returns the written file names. Throws std::runtime_error when a
/// file cannot be written.
std::vector<std::string> export_results(const ResultBundle& bundle, const std::filesystem::path& dir, Emit emit,
                                        Format format);

}  // namespace qbb::harness
