#pragma once

#include <cstdint>
#include <string>

#include "driftbench/data.hpp"

namespace driftbench::bench {

// Reads a comma-separated file (UTF-8, header row, RFC 4180 quoting) into a
// Dataset. Every column except the label and time columns becomes a numeric
// feature. Pass an empty time_column when the data has no timestamps.
// Timestamp cells are auto-detected as integer epoch seconds or ISO-8601;
// rows are sorted by timestamp when a time column is given.
Dataset ingest(const std::string& path, const std::string& label_column,
               const std::string& time_column = "");

// Writes a Dataset in the format ingest reads. Timestamps are emitted in the
// dataset's time_format ("epoch" or "iso8601").
void write_csv(const Dataset& dataset, const std::string& path);

// Timestamp helpers. parse_timestamp accepts integer epoch seconds or
// ISO-8601 dates/date-times (UTC, optional trailing 'Z'); format sets
// detected_format to "epoch" or "iso8601".
bool parse_timestamp(const std::string& text, std::int64_t& epoch_seconds,
                     std::string& detected_format);
std::string format_iso8601(std::int64_t epoch_seconds);

}  // namespace driftbench::bench
