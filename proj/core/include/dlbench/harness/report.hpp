#pragma once

#include <string>
#include <vector>

#include "dlbench/harness/runner.hpp"

namespace dlbench::harness {

inline constexpr const char* kMissingCell = "\xE2\x80\x94";  // em dash

struct ReportTable {
    std::vector<std::string> columns;  // -∂-rand, +∂-rand, -∂-seq, +∂-seq
    std::vector<std::string> rows;     // theory labels
    std::vector<std::vector<std::string>> cells;
};

/// One row per theory, ordered by family and then parameters; later
/// records for the same case replace earlier ones.
ReportTable buildReport(const std::vector<RunRecord>& records);

/// Space-padded columns, widths measured in code points.
std::string formatText(const ReportTable& table);
std::string formatCsv(const ReportTable& table);

}  // namespace dlbench::harness
