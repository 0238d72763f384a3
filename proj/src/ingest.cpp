#include "driftbench/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace driftbench::bench {

namespace {

// RFC 4180 record reader: handles quoted fields, "" escapes, and newlines
// inside quotes. Returns false on end of input with no record started.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else {
            field += c;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

bool parse_int(const std::string& text, std::int64_t& out) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool parse_fixed_uint(const std::string& s, std::size_t pos, std::size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        out = out * 10 + static_cast<unsigned>(s[i] - '0');
    }
    return true;
}

// "YYYY-MM-DD" optionally followed by "T HH:MM:SS" ('T' or space) and 'Z'.
bool parse_iso8601(const std::string& text, std::int64_t& out) {
    unsigned year, month, day;
    if (!parse_fixed_uint(text, 0, 4, year)) return false;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return false;
    if (!parse_fixed_uint(text, 5, 2, month) || !parse_fixed_uint(text, 8, 2, day)) return false;
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;

    unsigned hh = 0, mm = 0, ss = 0;
    std::size_t pos = 10;
    if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
        if (text.size() < pos + 9 || text[pos + 3] != ':' || text[pos + 6] != ':') return false;
        if (!parse_fixed_uint(text, pos + 1, 2, hh) || !parse_fixed_uint(text, pos + 4, 2, mm) ||
            !parse_fixed_uint(text, pos + 7, 2, ss)) {
            return false;
        }
        if (hh > 23 || mm > 59 || ss > 60) return false;
        pos += 9;
    }
    if (pos < text.size() && text[pos] == 'Z') ++pos;
    if (pos != text.size()) return false;

    out = days_from_civil(year, month, day) * 86400 + hh * 3600 + mm * 60 + ss;
    return true;
}

std::string quote_if_needed(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

bool parse_timestamp(const std::string& text, std::int64_t& epoch_seconds,
                     std::string& detected_format) {
    if (parse_int(text, epoch_seconds)) {
        detected_format = "epoch";
        return true;
    }
    if (parse_iso8601(text, epoch_seconds)) {
        detected_format = "iso8601";
        return true;
    }
    return false;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

Dataset ingest(const std::string& path, const std::string& label_column,
               const std::string& time_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open data file: " + path);

    std::vector<std::string> header;
    if (!read_record(in, header)) throw std::runtime_error("empty data file: " + path);

    std::size_t label_idx = header.size();
    std::size_t time_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) label_idx = i;
        if (!time_column.empty() && header[i] == time_column) time_idx = i;
    }
    if (label_idx == header.size()) {
        throw std::invalid_argument("label column '" + label_column + "' not found");
    }
    if (!time_column.empty() && time_idx == header.size()) {
        throw std::invalid_argument("time column '" + time_column + "' not found");
    }

    Dataset ds;
    ds.label_column = label_column;
    ds.time_column = time_column;
    ds.has_timestamps = !time_column.empty();
    std::vector<std::size_t> feature_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == label_idx || i == time_idx) continue;
        ds.schema.push_back(header[i]);
        feature_cols.push_back(i);
    }

    std::vector<std::string> fields;
    std::size_t row = 0;
    while (read_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank trailing line
        if (fields.size() != header.size()) {
            throw std::runtime_error("row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        }
        Sample s;
        s.features.reserve(feature_cols.size());
        for (std::size_t k = 0; k < feature_cols.size(); ++k) {
            double value = 0.0;
            if (!parse_double(fields[feature_cols[k]], value) || !std::isfinite(value)) {
                throw std::runtime_error("non-numeric value '" + fields[feature_cols[k]] +
                                         "' in column '" + ds.schema[k] + "' at row " +
                                         std::to_string(row));
            }
            s.features.push_back(value);
        }
        s.label = fields[label_idx];
        if (ds.has_timestamps) {
            std::int64_t ts = 0;
            std::string format;
            if (!parse_timestamp(fields[time_idx], ts, format)) {
                throw std::runtime_error("unparseable timestamp '" + fields[time_idx] +
                                         "' at row " + std::to_string(row));
            }
            if (ds.time_format.empty()) {
                ds.time_format = format;
            } else if (ds.time_format != format) {
                throw std::runtime_error("mixed timestamp formats at row " + std::to_string(row) +
                                         " ('" + format + "' after '" + ds.time_format + "')");
            }
            s.timestamp = static_cast<double>(ts);
        } else {
            s.timestamp = static_cast<double>(row - 1);
        }
        ds.samples.push_back(std::move(s));
    }

    if (ds.has_timestamps) {
        std::stable_sort(ds.samples.begin(), ds.samples.end(),
                         [](const Sample& a, const Sample& b) { return a.timestamp < b.timestamp; });
    }
    return ds;
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write data file: " + path);

    std::string header;
    if (dataset.has_timestamps) header += quote_if_needed(dataset.time_column) + ",";
    for (const auto& name : dataset.schema) header += quote_if_needed(name) + ",";
    header += quote_if_needed(dataset.label_column);
    out << header << "\n";

    for (const auto& s : dataset.samples) {
        std::string line;
        if (dataset.has_timestamps) {
            const auto ts = static_cast<std::int64_t>(s.timestamp);
            line += dataset.time_format == "iso8601" ? format_iso8601(ts) : std::to_string(ts);
            line += ',';
        }
        for (const double v : s.features) {
            line += format_double(v);
            line += ',';
        }
        line += quote_if_needed(s.label);
        out << line << "\n";
    }
}

}  // namespace driftbench::bench
