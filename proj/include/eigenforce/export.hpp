#pragma once

#include "eigenforce/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace eigenforce {

enum class ExportFormat { Csv, Json };

// Throws Error{UnsupportedFormat}.
ExportFormat parse_format(std::string_view name);

// One row per (step, tracked index), 17 significant digits, NaN as "nan".
void write_csv(const RunRecord& record, std::ostream& out);

// Lossless mirror of the record. Non-finite numbers become null.
nlohmann::json record_to_json(const RunRecord& record, bool include_timestamp = true);
RunRecord record_from_json(const nlohmann::json& j);

// Throws Error{IoError} when the file cannot be written or read.
void export_record(const RunRecord& record, ExportFormat format, const std::filesystem::path& path);
RunRecord import_json(const std::filesystem::path& path);

// Field-by-field equality; NaN equals NaN. The timestamp is compared only
// on request.
bool records_equal(const RunRecord& a, const RunRecord& b, bool compare_timestamp = false);

}  // namespace eigenforce
