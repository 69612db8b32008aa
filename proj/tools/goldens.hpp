#pragma once

#include <span>
#include <string_view>

namespace dlbench::cli {

struct GoldenFile {
    std::string_view name;  // e.g. dag_2-2
    std::string_view theory;
    std::string_view translation;
};

/// Copies of tests/goldens, compiled in at build time.
std::span<const GoldenFile> embeddedGoldens();

}  // namespace dlbench::cli
