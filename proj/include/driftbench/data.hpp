#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace driftbench {

// One labeled observation. `timestamp` is epoch seconds; when the source has
// no time column it falls back to the row index so "oldest" stays well defined.
struct Sample {
    std::vector<double> features;
    std::string label;
    double timestamp = 0.0;
};

// Contiguous slice of a stream, the unit of drift comparison.
struct Window {
    int id = 0;
    std::vector<std::string> schema;
    std::vector<Sample> samples;
    bool partial = false;
    bool has_time_range = false;
    double start = 0.0;  // [start, end)
    double end = 0.0;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }

    // Values of one feature over all samples.
    std::vector<double> column(std::size_t feature_index) const;
    // Values of one feature over samples with the given label.
    std::vector<double> column_for_class(std::size_t feature_index, const std::string& label) const;
    // True when every sample carries a non-empty label.
    bool labeled() const;
};

struct Dataset {
    std::vector<std::string> schema;
    std::vector<Sample> samples;
    bool has_timestamps = false;
    std::string time_format;   // "epoch", "iso8601", or "" when no time column
    std::string label_column = "label";
    std::string time_column;

    // Sorted unique labels.
    std::vector<std::string> class_list() const;
};

}  // namespace driftbench
