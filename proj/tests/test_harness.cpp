#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "dlbench/generator.hpp"
#include "dlbench/harness/endpoint.hpp"
#include "dlbench/harness/prompt.hpp"
#include "dlbench/harness/report.hpp"
#include "dlbench/harness/runner.hpp"
#include "dlbench/harness/verdict.hpp"

using namespace dlbench;
using namespace dlbench::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("dlbench_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

LoadedCase loaded(FamilySpec spec, CaseSetting setting) {
    LoadedCase c;
    c.benchmark = makeCase(spec, setting);
    c.recordedExpected = c.benchmark.expected;
    return c;
}

// Scripted transport: replies come from a callback; counts calls.
class ScriptedTransport : public ChatTransport {
public:
    std::function<std::string(const ChatRequest&, int)> reply;
    std::atomic<int> calls{0};
    std::mutex mu;
    std::vector<ChatRequest> seen;

    std::string complete(const ChatRequest& r) override {
        const int n = ++calls;
        {
            std::lock_guard lock(mu);
            seen.push_back(r);
        }
        return reply(r, n);
    }
};

RunOptions fixedOptions() {
    RunOptions o;
    o.model = "test-model";
    o.clock = [] { return std::string("2000-01-01T00:00:00Z"); };
    return o;
}

}  // namespace

// --- prompt ---------------------------------------------------------------

TEST(Prompt, ChainTwoSequentialIsExact) {
    const auto c = makeCase({Family::Chain, 2, std::nullopt}, {Polarity::Provable, Ordering::Sequential, 0});
    const auto p = buildPrompt(c);
    EXPECT_EQ(p.systemInstruction,
              "You are an expert on defeasible reasoning. Your task is to make logical conclusions based on "
              "provided knowledge (delimited with XML tags).");
    EXPECT_EQ(p.userMessage,
              "Based on the following knowledge alone:\n\n<knowledge>\n``A0000002 is an Arkon.\n"
              "If A0000002 is an Arkon, then typically A0000001 is an Arkon.\n"
              "If A0000001 is an Arkon, then typically A0000000 is an Arkon.''\n</knowledge>\n\n"
              "Is A0000000 an Arkon?\n\nLet's think step by step.");
    EXPECT_EQ(p.caseId, "chain_2_pos_seq_0");
    EXPECT_TRUE(p.warnings.empty());
}

TEST(Prompt, EmptyKnowledgeWarns) {
    BenchmarkCase c;
    const auto p = buildPrompt(c);
    EXPECT_NE(p.userMessage.find("<knowledge>\n``''\n</knowledge>"), std::string::npos);
    EXPECT_EQ(p.warnings.size(), 1u);
}

TEST(Prompt, RandomAndSequentialDifferOnlyInKnowledge) {
    FamilySpec spec{Family::Dag, 2, 2};
    const auto a = buildPrompt(makeCase(spec, {Polarity::Provable, Ordering::Sequential, 0})).userMessage;
    const auto b = buildPrompt(makeCase(spec, {Polarity::Provable, Ordering::Random, 3})).userMessage;
    EXPECT_NE(a, b);
    const auto open = a.find("<knowledge>");
    const auto close = a.find("</knowledge>");
    EXPECT_EQ(a.substr(0, open), b.substr(0, open));
    EXPECT_EQ(a.substr(close), b.substr(b.find("</knowledge>")));
}

TEST(Prompt, KnowledgeIsNotRescannedForPlaceholders) {
    BenchmarkCase c;
    c.nlText = {"{atom} is literal text."};
    EXPECT_NE(buildPrompt(c).userMessage.find("``{atom} is literal text.''"), std::string::npos);
}

// --- verdict extraction ---------------------------------------------------

TEST(Verdict, HandLabeledCorpus) {
    std::ifstream in(fs::path(DLBENCH_FIXTURE_DIR) / "grader_corpus.json");
    const auto corpus = nlohmann::json::parse(in);
    ASSERT_GE(corpus.size(), 30u);
    std::set<std::string> classes;
    for (const auto& item : corpus) {
        const auto label = item.at("label").get<std::string>();
        classes.insert(label);
        EXPECT_EQ(toString(extractVerdict(item.at("response").get<std::string>())), label) << item.at("id");
    }
    EXPECT_EQ(classes.size(), 4u);
}

TEST(Verdict, SpecExamples) {
    EXPECT_EQ(extractVerdict("Thus, A0000000 is an Arkon."), Extracted::Affirmative);
    EXPECT_EQ(extractVerdict("No conclusion can be drawn about A0000000."), Extracted::NoConclusion);
    EXPECT_EQ(extractVerdict(""), Extracted::Unparseable);
}

TEST(Verdict, OnlyFinalParagraphCounts) {
    EXPECT_EQ(extractVerdict("A0000000 is not an Arkon.\n\nOn reflection, A0000000 is an Arkon."),
              Extracted::Affirmative);
    EXPECT_EQ(extractVerdict("A0000000 is an Arkon.\n\nWait. A0000000 is not an Arkon."), Extracted::Negative);
}

TEST(Verdict, ContextPlaceholders) {
    ExtractionContext ctx{"Q7", "a", "Zorp"};
    EXPECT_EQ(extractVerdict("Therefore Q7 is a Zorp.", CueLexicon::defaults(), ctx), Extracted::Affirmative);
    EXPECT_EQ(extractVerdict("Therefore Q7 is not a Zorp.", CueLexicon::defaults(), ctx), Extracted::Negative);
}

TEST(Verdict, ShippedLexiconMatchesDefaults) {
    const auto file = CueLexicon::load(fs::path(DLBENCH_SOURCE_DIR) / "share" / "cues.json");
    const auto builtin = CueLexicon::defaults();
    EXPECT_EQ(file.version, builtin.version);
    EXPECT_EQ(file.negative, builtin.negative);
    EXPECT_EQ(file.noConclusion, builtin.noConclusion);
    EXPECT_EQ(file.affirmative, builtin.affirmative);
}

TEST(Verdict, CustomLexicon) {
    const auto dir = scratch("lexicon");
    write(dir / "cues.json", R"({"version":"x","negative":["nope"],"no_conclusion":[],"affirmative":["yep"]})");
    const auto lex = CueLexicon::load(dir / "cues.json");
    EXPECT_EQ(extractVerdict("yep", lex), Extracted::Affirmative);
    EXPECT_EQ(extractVerdict("nope, yep", lex), Extracted::Negative);
    EXPECT_EQ(extractVerdict("A0000000 is an Arkon.", lex), Extracted::Unparseable);
    write(dir / "bad.json", R"({"version":"x"})");
    EXPECT_THROW(CueLexicon::load(dir / "bad.json"), std::runtime_error);
}

TEST(Verdict, ForcedChoice) {
    EXPECT_EQ(extractForcedChoice("YES"), Extracted::Affirmative);
    EXPECT_EQ(extractForcedChoice("NO"), Extracted::Negative);
    EXPECT_EQ(extractForcedChoice("CANNOT CONCLUDE"), Extracted::NoConclusion);
    EXPECT_EQ(extractForcedChoice("**CANNOT CONCLUDE**"), Extracted::NoConclusion);
    EXPECT_EQ(extractForcedChoice("maybe"), Extracted::Unparseable);
}

TEST(Grade, PaperBinaryAndStrictTernary) {
    EXPECT_EQ(grade(Extracted::NoConclusion, Verdict::Undetermined, GradingMode::PaperBinary), Grade::Correct);
    EXPECT_EQ(grade(Extracted::Negative, Verdict::Undetermined, GradingMode::PaperBinary), Grade::Correct);
    EXPECT_EQ(grade(Extracted::Negative, Verdict::Undetermined, GradingMode::StrictTernary), Grade::Error);
    EXPECT_EQ(grade(Extracted::NoConclusion, Verdict::ProvablyFalse, GradingMode::StrictTernary), Grade::Error);
    EXPECT_EQ(grade(Extracted::Negative, Verdict::ProvablyFalse, GradingMode::StrictTernary), Grade::Correct);
    for (auto m : {GradingMode::PaperBinary, GradingMode::StrictTernary}) {
        EXPECT_EQ(grade(Extracted::Affirmative, Verdict::ProvablyTrue, m), Grade::Correct);
        EXPECT_EQ(grade(Extracted::Affirmative, Verdict::Undetermined, m), Grade::Error);
        EXPECT_EQ(grade(Extracted::NoConclusion, Verdict::ProvablyTrue, m), Grade::Error);
        EXPECT_EQ(grade(Extracted::Unparseable, Verdict::ProvablyTrue, m), Grade::Unparseable);
    }
}

TEST(Grade, EnumStringsRoundTrip) {
    for (auto e : {Extracted::Affirmative, Extracted::Negative, Extracted::NoConclusion, Extracted::Unparseable})
        EXPECT_EQ(extractedFromString(toString(e)), e);
    for (auto g : {Grade::Correct, Grade::Error, Grade::Unparseable}) EXPECT_EQ(gradeFromString(toString(g)), g);
    EXPECT_EQ(gradingModeFromString("strict"), GradingMode::StrictTernary);
    EXPECT_EQ(gradingModeFromString("PaperBinary"), GradingMode::PaperBinary);
    EXPECT_FALSE(gradingModeFromString("lenient").has_value());
}

// --- config ---------------------------------------------------------------

TEST(Config, ParsesAllKeys) {
    const auto cfg = parseConfig(
        "[endpoint]\nbase_url = \"http://localhost:8080/v1\"  # local\nmodel = \"m\"\napi_key_env = \"KEY\"\n"
        "temperature = 0.5\ntimeout_seconds = 2.5\nmax_retries = 1\n[run]\nparallelism = 2\n"
        "grading_mode = \"strict\"\ncue_lexicon = \"cues.json\"\nforced_choice = true\n"
        "category_noun = \"Zorp\"\narticle = \"a\"\n",
        "/etc/dl");
    EXPECT_EQ(cfg.endpoint.baseUrl, "http://localhost:8080/v1");
    EXPECT_EQ(cfg.endpoint.model, "m");
    EXPECT_EQ(cfg.endpoint.credentialEnv, "KEY");
    EXPECT_DOUBLE_EQ(cfg.endpoint.temperature, 0.5);
    EXPECT_EQ(cfg.endpoint.timeout, std::chrono::milliseconds(2500));
    EXPECT_EQ(cfg.endpoint.maxRetries, 1);
    EXPECT_EQ(cfg.parallelism, 2);
    EXPECT_EQ(cfg.gradingMode, GradingMode::StrictTernary);
    EXPECT_EQ(cfg.cueLexicon, fs::path("/etc/dl/cues.json"));
    EXPECT_TRUE(cfg.forcedChoice);
    EXPECT_EQ(cfg.categoryNoun, "Zorp");
    EXPECT_EQ(cfg.article, "a");
}

TEST(Config, Defaults) {
    const auto cfg = parseConfig("");
    EXPECT_EQ(cfg.endpoint.temperature, 0.0);
    EXPECT_EQ(cfg.parallelism, 4);
    EXPECT_EQ(cfg.gradingMode, GradingMode::PaperBinary);
    EXPECT_FALSE(cfg.forcedChoice);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parseConfig("api_key = \"sk-123\"\n"), ConfigError);
    EXPECT_THROW(parseConfig("model = m\n"), ConfigError);
    EXPECT_THROW(parseConfig("temperature = \"hot\"\n"), ConfigError);
    EXPECT_THROW(parseConfig("parallelism = 0\n"), ConfigError);
    EXPECT_THROW(parseConfig("grading_mode = \"lenient\"\n"), ConfigError);
    EXPECT_THROW(parseConfig("just words\n"), ConfigError);
    EXPECT_THROW(parseConfig("forced_choice = yes\n"), ConfigError);
}

TEST(Config, ShippedExampleParses) {
    const auto cfg = loadConfig(fs::path(DLBENCH_SOURCE_DIR) / "share" / "harness.example.toml");
    EXPECT_EQ(cfg.endpoint.credentialEnv, "OPENAI_API_KEY");
    ASSERT_TRUE(cfg.cueLexicon.has_value());
    EXPECT_TRUE(fs::exists(*cfg.cueLexicon));
}

// --- transports -----------------------------------------------------------

TEST(Transport, MissingCredentialFailsBeforeNetwork) {
    ModelEndpointConfig cfg;
    cfg.baseUrl = "http://192.0.2.1:9";  // unroutable; must never be contacted
    cfg.credentialEnv = "DLBENCH_TEST_SURELY_UNSET_KEY";
    ::unsetenv(cfg.credentialEnv.c_str());
    const auto start = std::chrono::steady_clock::now();
    EXPECT_THROW(HttpChatTransport{cfg}, CredentialMissing);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
}

TEST(Transport, FixtureReplies) {
    const auto dir = scratch("fixtures");
    write(dir / "c1.txt", "hello");
    write(dir / "c1.followup.txt", "YES");
    write(dir / "c2.fault", "connection reset\n");
    FixtureTransport t(dir);
    EXPECT_EQ(t.complete({"c1", "m", 0, {{"system", "s"}, {"user", "u"}}}), "hello");
    EXPECT_EQ(t.complete({"c1", "m", 0, {{"system", "s"}, {"user", "u"}, {"assistant", "a"}, {"user", "f"}}}), "YES");
    try {
        t.complete({"c2", "m", 0, {}});
        FAIL();
    } catch (const TransportError& e) {
        EXPECT_STREQ(e.what(), "connection reset");
    }
    EXPECT_THROW(t.complete({"missing", "m", 0, {}}), TransportError);
}

// --- runner ---------------------------------------------------------------

TEST(Runner, GradesAgainstRecomputedExpectation) {
    ScriptedTransport t;
    t.reply = [](const ChatRequest&, int) { return std::string("Step by step...\n\nSo A0000000 is an Arkon."); };
    auto c = loaded({Family::Chain, 2, std::nullopt}, {Polarity::Provable, Ordering::Sequential, 0});
    c.recordedExpected = Verdict::Undetermined;  // stale metadata
    const auto r = runCase(c, t, fixedOptions());
    EXPECT_EQ(r.caseId, "chain_2_pos_seq_0");
    EXPECT_EQ(r.theory, "chain(2)");
    EXPECT_EQ(r.setting, "+∂-seq");
    EXPECT_EQ(r.expected, Verdict::ProvablyTrue);
    EXPECT_TRUE(r.expectedMismatch.has_value());
    EXPECT_EQ(r.extracted, Extracted::Affirmative);
    EXPECT_EQ(r.grade, Grade::Correct);
    EXPECT_EQ(r.attempts, 1);
    EXPECT_FALSE(r.error.has_value());
    EXPECT_EQ(r.timestamp, "2000-01-01T00:00:00Z");
    ASSERT_EQ(t.seen.size(), 1u);
    EXPECT_EQ(t.seen[0].messages.size(), 2u);
    EXPECT_EQ(t.seen[0].messages[0].role, "system");
    EXPECT_EQ(t.seen[0].temperature, 0.0);
}

TEST(Runner, RetriesThenRecordsUnparseable) {
    ScriptedTransport t;
    t.reply = [](const ChatRequest&, int) -> std::string { throw TransportError("timed out"); };
    auto opts = fixedOptions();
    opts.maxRetries = 2;
    const auto r = runCase(loaded({Family::Chain, 2, std::nullopt}, {Polarity::Provable, Ordering::Sequential, 0}), t, opts);
    EXPECT_EQ(t.calls.load(), 3);
    EXPECT_EQ(r.attempts, 3);
    EXPECT_EQ(r.grade, Grade::Unparseable);
    EXPECT_EQ(r.extracted, Extracted::Unparseable);
    ASSERT_TRUE(r.error.has_value());
    EXPECT_NE(r.error->find("3 attempts"), std::string::npos);
    EXPECT_NE(r.error->find("timed out"), std::string::npos);
}

TEST(Runner, RecoversAfterTransientFailure) {
    ScriptedTransport t;
    t.reply = [](const ChatRequest&, int n) -> std::string {
        if (n == 1) throw TransportError("503");
        return "A0000000 is not an Arkon.";
    };
    const auto r = runCase(loaded({Family::Circle, 3, std::nullopt}, {Polarity::Unprovable, Ordering::Sequential, 0}), t,
                           fixedOptions());
    EXPECT_EQ(r.attempts, 2);
    EXPECT_FALSE(r.error.has_value());
    EXPECT_EQ(r.grade, Grade::Correct);
}

TEST(Runner, ForcedChoiceOverridesLexicalReading) {
    ScriptedTransport t;
    t.reply = [](const ChatRequest& r, int) { return std::string(r.messages.size() > 2 ? "CANNOT CONCLUDE" : "It is an Arkon."); };
    auto opts = fixedOptions();
    opts.forcedChoice = true;
    const auto r = runCase(loaded({Family::Circle, 3, std::nullopt}, {Polarity::Unprovable, Ordering::Sequential, 0}), t, opts);
    ASSERT_TRUE(r.followUpResponse.has_value());
    EXPECT_EQ(r.extracted, Extracted::NoConclusion);
    EXPECT_EQ(r.grade, Grade::Correct);
    ASSERT_EQ(t.seen.size(), 2u);
    EXPECT_EQ(t.seen[1].messages.back().content, kForcedChoiceFollowUp);
}

TEST(Runner, RecordJsonRoundTripHasNoCredential) {
    ::setenv("DLBENCH_TEST_SECRET", "sk-very-secret", 1);
    ScriptedTransport t;
    t.reply = [](const ChatRequest&, int) { return std::string("No."); };
    const auto r = runCase(loaded({Family::Chain, 2, std::nullopt}, {Polarity::Unprovable, Ordering::Random, 4}), t,
                           fixedOptions());
    const auto j = toJson(r);
    EXPECT_EQ(j.dump().find("sk-very-secret"), std::string::npos);
    EXPECT_EQ(recordFromJson(j), r);
    EXPECT_THROW(recordFromJson(nlohmann::json{{"case_id", "x"}}), std::runtime_error);
}

TEST(Runner, ParallelRunKeepsCaseOrder) {
    std::vector<LoadedCase> cases;
    for (const auto& spec : paperPreset())
        for (const auto& s : paperSettings(7)) cases.push_back(loaded(spec, s));
    ScriptedTransport t;
    t.reply = [](const ChatRequest& r, int n) {
        std::this_thread::sleep_for(std::chrono::milliseconds((n * 7) % 5));
        return "About " + r.caseId + ": A0000000 is an Arkon.";
    };
    const auto dir = scratch("parallel");
    const auto sink = dir / "records.jsonl";
    auto opts = fixedOptions();
    opts.parallelism = 6;
    const auto records = runCases(cases, t, opts, &sink);
    ASSERT_EQ(records.size(), 32u);
    for (std::size_t i = 0; i < cases.size(); ++i) EXPECT_EQ(records[i].caseId, cases[i].benchmark.id());
    EXPECT_EQ(readRecords(sink), records);

    // Append-only: a second run adds lines.
    runCases(cases, t, opts, &sink);
    EXPECT_EQ(readRecords(sink).size(), 64u);
}

TEST(Runner, MalformedRecordLineNamed) {
    const auto dir = scratch("badjsonl");
    write(dir / "records.jsonl", "{}\n");
    try {
        readRecords(dir / "records.jsonl");
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find(":1:"), std::string::npos);
    }
}

// --- report ---------------------------------------------------------------

namespace {

RunRecord rec(std::string theory, std::string setting, Grade g) {
    RunRecord r;
    r.theory = std::move(theory);
    r.setting = std::move(setting);
    r.grade = g;
    return r;
}

}  // namespace

TEST(Report, EmptyRecordSetIsHeaderOnly) {
    const auto t = buildReport({});
    EXPECT_TRUE(t.rows.empty());
    EXPECT_EQ(formatCsv(t), "theory,-∂-rand,+∂-rand,-∂-seq,+∂-seq\n");
    EXPECT_EQ(formatText(t), "theory  -∂-rand  +∂-rand  -∂-seq  +∂-seq\n");
}

TEST(Report, MissingCellsShowDash) {
    std::vector<RunRecord> rs{rec("chain(8)", "-∂-rand", Grade::Correct), rec("dag(3,2)", "+∂-seq", Grade::Error),
                              rec("dag(3,2)", "-∂-seq", Grade::Correct)};
    const auto t = buildReport(rs);
    ASSERT_EQ(t.rows, (std::vector<std::string>{"chain(8)", "dag(3,2)"}));
    EXPECT_EQ(t.cells[0], (std::vector<std::string>{"Correct", "—", "—", "—"}));
    EXPECT_EQ(t.cells[1], (std::vector<std::string>{"—", "—", "Correct", "Error"}));
    EXPECT_EQ(formatCsv(t), "theory,-∂-rand,+∂-rand,-∂-seq,+∂-seq\nchain(8),Correct,—,—,—\n\"dag(3,2)\",—,—,Correct,Error\n");
}

TEST(Report, RowsFollowFamilyOrderAndLaterRecordsWin) {
    std::vector<RunRecord> rs{rec("hierarchies(2,4)", "+∂-seq", Grade::Correct), rec("levels-(5)", "+∂-seq", Grade::Error),
                              rec("levels(5)", "+∂-seq", Grade::Error), rec("chain(8)", "+∂-seq", Grade::Error),
                              rec("chain(8)", "+∂-seq", Grade::Correct), rec("chain(10)", "+∂-seq", Grade::Correct)};
    const auto t = buildReport(rs);
    EXPECT_EQ(t.rows, (std::vector<std::string>{"chain(8)", "chain(10)", "levels-(5)", "levels(5)", "hierarchies(2,4)"}));
    EXPECT_EQ(t.cells[0][3], "Correct");
}

TEST(Report, TextColumnsAlign) {
    const auto text = formatText(buildReport({rec("hierarchies(2,4)", "-∂-rand", Grade::Unparseable)}));
    EXPECT_EQ(text,
              "theory            -∂-rand      +∂-rand  -∂-seq  +∂-seq\n"
              "hierarchies(2,4)  Unparseable  —        —       —\n");
}
