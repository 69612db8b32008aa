#include "dlbench/harness/report.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace dlbench::harness {

namespace {

// Sort key for labels such as `dag(3,2)`; unknown families sort last by name.
std::tuple<int, int, int, std::string> rowKey(const std::string& theory) {
    const auto open = theory.find('(');
    const auto name = theory.substr(0, open);
    int rank = static_cast<int>(std::size(kAllFamilies));
    if (auto f = familyFromString(name)) rank = static_cast<int>(*f);
    int n = 0, k = 0;
    if (open != std::string::npos) {
        try {
            std::size_t used = 0;
            n = std::stoi(theory.substr(open + 1), &used);
            const auto comma = open + 1 + used;
            if (comma < theory.size() && theory[comma] == ',') k = std::stoi(theory.substr(comma + 1));
        } catch (const std::exception&) {
        }
    }
    return {rank, n, k, theory};
}

std::size_t displayWidth(const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string csvField(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

ReportTable buildReport(const std::vector<RunRecord>& records) {
    ReportTable t;
    for (const auto& s : paperSettings(0)) t.columns.push_back(settingLabel(s.polarity, s.ordering));

    std::map<std::tuple<int, int, int, std::string>, std::map<std::string, std::string>> grid;
    for (const auto& r : records) grid[rowKey(r.theory)][r.setting] = std::string(toString(r.grade));

    for (const auto& [key, byColumn] : grid) {
        t.rows.push_back(std::get<3>(key));
        std::vector<std::string> line;
        for (const auto& col : t.columns) {
            auto it = byColumn.find(col);
            line.push_back(it == byColumn.end() ? kMissingCell : it->second);
        }
        t.cells.push_back(std::move(line));
    }
    return t;
}

std::string formatText(const ReportTable& table) {
    std::vector<std::size_t> width(table.columns.size() + 1, displayWidth("theory"));
    for (const auto& r : table.rows) width[0] = std::max(width[0], displayWidth(r));
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        width[c + 1] = displayWidth(table.columns[c]);
        for (const auto& row : table.cells) width[c + 1] = std::max(width[c + 1], displayWidth(row[c]));
    }
    auto emit = [&](const std::string& first, const std::vector<std::string>& rest) {
        std::string line = first + std::string(width[0] - displayWidth(first), ' ');
        for (std::size_t c = 0; c < rest.size(); ++c) {
            line += "  " + rest[c];
            if (c + 1 < rest.size()) line += std::string(width[c + 1] - displayWidth(rest[c]), ' ');
        }
        return line + "\n";
    };
    std::string out = emit("theory", table.columns);
    for (std::size_t r = 0; r < table.rows.size(); ++r) out += emit(table.rows[r], table.cells[r]);
    return out;
}

std::string formatCsv(const ReportTable& table) {
    std::string out = "theory";
    for (const auto& c : table.columns) out += "," + csvField(c);
    out += "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += csvField(table.rows[r]);
        for (const auto& cell : table.cells[r]) out += "," + csvField(cell);
        out += "\n";
    }
    return out;
}

}  // namespace dlbench::harness
