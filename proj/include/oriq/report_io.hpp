#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "oriq/metrics.hpp"

namespace oriq {

/// Non-finite values become the strings "inf", "-inf" or "nan".
nlohmann::json number_to_json(double v);

/// Six significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_sig6(double v);

nlohmann::json to_json(const SequenceReport& r);

/// One row per (metric, phase, plane, frame index | "avg").
void write_csv(std::ostream& out, const SequenceReport& r);

/// Writes `text` to `path` or to stdout when path is empty or "-".
void write_text_output(const std::filesystem::path& path, const std::string& text);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace oriq
