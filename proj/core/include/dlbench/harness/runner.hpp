#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlbench/generator.hpp"
#include "dlbench/harness/endpoint.hpp"
#include "dlbench/harness/prompt.hpp"
#include "dlbench/harness/verdict.hpp"

namespace dlbench::harness {

struct RunRecord {
    std::string caseId;
    std::string theory;   // spec label, e.g. dag(3,2)
    std::string setting;  // column label, e.g. -∂-rand
    std::string systemInstruction;
    std::string prompt;
    std::string response;
    std::optional<std::string> followUpResponse;
    std::string model;
    std::string timestamp;  // ISO 8601, UTC
    Extracted extracted = Extracted::Unparseable;
    Verdict expected = Verdict::Undetermined;
    std::optional<std::string> expectedMismatch;  // meta.json disagreed with the reasoner
    Grade grade = Grade::Unparseable;
    GradingMode gradingMode = GradingMode::PaperBinary;
    int attempts = 0;
    std::optional<std::string> error;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

nlohmann::json toJson(const RunRecord& r);
/// Throws std::runtime_error on missing or ill-typed fields.
RunRecord recordFromJson(const nlohmann::json& j);

/// One record per non-empty line; throws std::runtime_error naming the line
/// on malformed input.
std::vector<RunRecord> readRecords(const std::filesystem::path& jsonl);

struct RunOptions {
    std::string model;
    double temperature = 0.0;
    int maxRetries = 3;
    int parallelism = 4;
    GradingMode gradingMode = GradingMode::PaperBinary;
    bool forcedChoice = false;
    CueLexicon lexicon = CueLexicon::defaults();
    RenderConfig render;
    /// Produces the record timestamp; replaced by a constant for offline runs.
    std::function<std::string()> clock;
};

RunOptions runOptionsFrom(const HarnessConfig& cfg);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utcNow();

/// Prompts the model for one case. Transport failures are retried up to
/// maxRetries times; after that the record is Unparseable and carries the
/// last error and the attempt count.
RunRecord runCase(const LoadedCase& c, ChatTransport& transport, const RunOptions& opts);

/// Runs the cases with at most `parallelism` requests in flight. Records
/// are returned in input order and, when `sink` is set, appended to it in
/// that order as soon as every earlier case has finished.
std::vector<RunRecord> runCases(const std::vector<LoadedCase>& cases, ChatTransport& transport,
                                const RunOptions& opts, const std::filesystem::path* sink = nullptr);

}  // namespace dlbench::harness
