#include "dlbench/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

namespace dlbench::harness {

using nlohmann::json;

namespace {

template <class T>
json optional(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<std::string> optionalString(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

template <class E>
E parseEnum(const json& j, const char* key, std::optional<E> (*from)(std::string_view) noexcept) {
    auto text = j.at(key).get<std::string>();
    auto v = from(text);
    if (!v) throw std::runtime_error(std::string("bad value for ") + key + ": " + text);
    return *v;
}

}  // namespace

json toJson(const RunRecord& r) {
    return json{
        {"case_id", r.caseId},
        {"theory", r.theory},
        {"setting", r.setting},
        {"system_instruction", r.systemInstruction},
        {"prompt", r.prompt},
        {"response", r.response},
        {"follow_up_response", optional(r.followUpResponse)},
        {"model", r.model},
        {"timestamp", r.timestamp},
        {"extracted", std::string(toString(r.extracted))},
        {"expected", std::string(toString(r.expected))},
        {"expected_mismatch", optional(r.expectedMismatch)},
        {"grade", std::string(toString(r.grade))},
        {"grading_mode", std::string(toString(r.gradingMode))},
        {"attempts", r.attempts},
        {"error", optional(r.error)},
    };
}

RunRecord recordFromJson(const json& j) {
    try {
        RunRecord r;
        r.caseId = j.at("case_id").get<std::string>();
        r.theory = j.at("theory").get<std::string>();
        r.setting = j.at("setting").get<std::string>();
        r.systemInstruction = j.at("system_instruction").get<std::string>();
        r.prompt = j.at("prompt").get<std::string>();
        r.response = j.at("response").get<std::string>();
        r.followUpResponse = optionalString(j, "follow_up_response");
        r.model = j.at("model").get<std::string>();
        r.timestamp = j.at("timestamp").get<std::string>();
        r.extracted = parseEnum<Extracted>(j, "extracted", extractedFromString);
        r.expected = parseEnum<Verdict>(j, "expected", verdictFromString);
        r.expectedMismatch = optionalString(j, "expected_mismatch");
        r.grade = parseEnum<Grade>(j, "grade", gradeFromString);
        r.gradingMode = parseEnum<GradingMode>(j, "grading_mode", gradingModeFromString);
        r.attempts = j.at("attempts").get<int>();
        r.error = optionalString(j, "error");
        return r;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed run record: ") + e.what());
    }
}

std::vector<RunRecord> readRecords(const std::filesystem::path& jsonl) {
    std::ifstream in(jsonl);
    if (!in) throw std::runtime_error("cannot read " + jsonl.string());
    std::vector<RunRecord> out;
    std::size_t lineNo = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(recordFromJson(json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(jsonl.string() + ":" + std::to_string(lineNo) + ": " + e.what());
        }
    }
    return out;
}

RunOptions runOptionsFrom(const HarnessConfig& cfg) {
    RunOptions o;
    o.model = cfg.endpoint.model;
    o.temperature = cfg.endpoint.temperature;
    o.maxRetries = cfg.endpoint.maxRetries;
    o.parallelism = cfg.parallelism;
    o.gradingMode = cfg.gradingMode;
    o.forcedChoice = cfg.forcedChoice;
    o.lexicon = cfg.cueLexicon ? CueLexicon::load(*cfg.cueLexicon) : CueLexicon::defaults();
    o.render.categoryNoun = cfg.categoryNoun;
    o.render.article = cfg.article;
    return o;
}

std::string utcNow() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunRecord runCase(const LoadedCase& c, ChatTransport& transport, const RunOptions& opts) {
    const auto& bc = c.benchmark;
    const auto bundle = buildPrompt(bc, opts.render);

    RunRecord r;
    r.caseId = bc.id();
    r.theory = label(bc.spec);
    r.setting = settingLabel(bc.setting.polarity, bc.setting.ordering);
    r.systemInstruction = bundle.systemInstruction;
    r.prompt = bundle.userMessage;
    r.model = opts.model;
    r.timestamp = opts.clock ? opts.clock() : utcNow();
    r.expected = bc.expected;
    r.gradingMode = opts.gradingMode;
    if (c.recordedExpected && *c.recordedExpected != bc.expected) {
        r.expectedMismatch = "meta.json records " + std::string(toString(*c.recordedExpected)) +
                             ", reasoner derives " + std::string(toString(bc.expected));
    }

    ChatRequest request{r.caseId, opts.model, opts.temperature,
                        {{"system", bundle.systemInstruction}, {"user", bundle.userMessage}}};

    // Sends the request with retries; returns nullopt once they are used up.
    auto send = [&](const ChatRequest& req) -> std::optional<std::string> {
        for (int attempt = 0; attempt <= opts.maxRetries; ++attempt) {
            ++r.attempts;
            try {
                return transport.complete(req);
            } catch (const TransportError& e) {
                r.error = e.what();
            }
        }
        return std::nullopt;
    };

    auto reply = send(request);
    if (!reply) {
        r.error = "gave up after " + std::to_string(r.attempts) + " attempts: " + r.error.value_or("");
        r.extracted = Extracted::Unparseable;
        r.grade = Grade::Unparseable;
        return r;
    }
    r.error.reset();
    r.response = *reply;

    const ExtractionContext ctx{bc.queryAtom, opts.render.article, opts.render.categoryNoun};
    r.extracted = extractVerdict(r.response, opts.lexicon, ctx);

    if (opts.forcedChoice) {
        request.messages.push_back({"assistant", r.response});
        request.messages.push_back({"user", kForcedChoiceFollowUp});
        if (auto second = send(request)) {
            r.error.reset();
            r.followUpResponse = *second;
            r.extracted = extractForcedChoice(*second);
        } else {
            r.error = "follow-up failed after retries: " + r.error.value_or("");
        }
    }
    r.grade = grade(r.extracted, r.expected, opts.gradingMode);
    return r;
}

std::vector<RunRecord> runCases(const std::vector<LoadedCase>& cases, ChatTransport& transport,
                                const RunOptions& opts, const std::filesystem::path* sink) {
    std::vector<std::optional<RunRecord>> slots(cases.size());
    std::ofstream out;
    if (sink) {
        std::filesystem::create_directories(sink->parent_path());
        out.open(*sink, std::ios::app);
        if (!out) throw std::runtime_error("cannot append to " + sink->string());
    }

    std::mutex mu;
    std::size_t committed = 0;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) {
            try {
                auto rec = runCase(cases[i], transport, opts);
                std::lock_guard lock(mu);
                slots[i] = std::move(rec);
                while (committed < slots.size() && slots[committed]) {
                    if (out.is_open()) out << toJson(*slots[committed]).dump() << '\n' << std::flush;
                    ++committed;
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = cases.size();
            }
        }
    };

    const auto n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, opts.parallelism)), 1,
                                           std::max<std::size_t>(1, cases.size()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);

    std::vector<RunRecord> records;
    records.reserve(cases.size());
    for (auto& s : slots) records.push_back(std::move(*s));
    return records;
}

}  // namespace dlbench::harness
