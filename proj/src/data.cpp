#include "driftbench/data.hpp"

#include <algorithm>
#include <set>

namespace driftbench {

std::vector<double> Window::column(std::size_t feature_index) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.features[feature_index]);
    return out;
}

std::vector<double> Window::column_for_class(std::size_t feature_index,
                                             const std::string& label) const {
    std::vector<double> out;
    for (const auto& s : samples) {
        if (s.label == label) out.push_back(s.features[feature_index]);
    }
    return out;
}

bool Window::labeled() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const Sample& s) { return !s.label.empty(); });
}

std::vector<std::string> Dataset::class_list() const {
    std::set<std::string> seen;
    for (const auto& s : samples) seen.insert(s.label);
    return {seen.begin(), seen.end()};
}

}  // namespace driftbench
