#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlbench/generator.hpp"
#include "dlbench/harness/endpoint.hpp"
#include "dlbench/harness/report.hpp"
#include "dlbench/harness/runner.hpp"
#include "dlbench/parser.hpp"
#include "dlbench/reasoner.hpp"
#include "dlbench/translator.hpp"

namespace dlbench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown for bad input that CLI11 cannot see (malformed literal, unknown
// family name); maps to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string readFile(const fs::path& p) {
    if (!fs::exists(p)) throw std::runtime_error(p.string() + ": no such file");
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error(p.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

Theory loadTheory(const fs::path& p, std::ostream& err) {
    auto parsed = parseTheory(readFile(p));
    for (const auto& d : parsed.diagnostics) err << p.string() << ":" << toString(d) << "\n";
    if (!parsed.ok()) throw std::runtime_error(p.string() + ": invalid theory");
    return std::move(*parsed.theory);
}

Literal parseLiteral(std::string text) {
    bool neg = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '~')) {
        neg = true;
        text.erase(0, 1);
    }
    if (!Atom::isValidName(text)) throw UsageError("not a literal: '" + text + "'");
    return neg ? negative(text) : positive(text);
}

std::string tagLine(TagState s, char family, const Literal& q) {
    const char sign = s == TagState::ProvedPositive ? '+' : s == TagState::ProvedNegative ? '-' : '?';
    return std::string{sign, family, ' '} + toString(q);
}

json traceJson(const DerivationTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace) {
        steps.push_back({{"conclusion", toString(s.conclusion)}, {"rules", s.rules}, {"premises", s.premises}});
    }
    return steps;
}

// --- reason ---------------------------------------------------------------

struct ReasonArgs {
    std::string file;
    std::string query;
    bool explain = false;
    bool json = false;
};

int doReason(const ReasonArgs& a, std::ostream& out, std::ostream& err) {
    const auto theory = loadTheory(a.file, err);
    const auto conclusions = computeConclusions(theory);

    std::optional<Literal> q;
    if (!a.query.empty()) q = parseLiteral(a.query);

    std::optional<DerivationTrace> trace;
    std::string traceNote;
    if (a.explain) {
        if (!q) throw UsageError("--explain needs --query");
        try {
            trace = explain(theory, *q);
        } catch (const NoDerivation& e) {
            traceNote = e.what();
        }
    }

    if (a.json) {
        json doc;
        doc["conclusions"] = json::array();
        for (const auto& c : conclusions.entries()) {
            doc["conclusions"].push_back({{"literal", toString(c.literal)},
                                          {"delta", tagLine(c.delta, 'D', c.literal).substr(0, 2)},
                                          {"partial", tagLine(c.partial, 'd', c.literal).substr(0, 2)}});
        }
        if (q) {
            doc["query"] = {{"literal", toString(*q)},
                            {"delta", tagLine(conclusions.delta(*q), 'D', *q).substr(0, 2)},
                            {"partial", tagLine(conclusions.partial(*q), 'd', *q).substr(0, 2)},
                            {"verdict", toString(query(conclusions, *q))}};
        }
        if (a.explain) doc["trace"] = trace ? traceJson(*trace) : json(nullptr);
        out << doc.dump(2) << "\n";
    } else if (q) {
        out << tagLine(conclusions.partial(*q), 'd', *q) << "\n";
        if (trace) out << formatTrace(*trace);
    } else {
        for (const auto& c : conclusions.entries()) {
            out << tagLine(c.delta, 'D', c.literal) << "\n" << tagLine(c.partial, 'd', c.literal) << "\n";
        }
    }
    if (!traceNote.empty()) err << traceNote << "\n";
    return kExitOk;
}

// --- translate ------------------------------------------------------------

int doTranslate(const std::string& file, const RenderConfig& render, std::ostream& out, std::ostream& err) {
    const auto rendering = renderTheory(loadTheory(file, err), render);
    for (const auto& w : rendering.warnings) err << "warning: " << w << "\n";
    for (const auto& s : rendering.sentences) out << s << "\n";
    return kExitOk;
}

// --- generate -------------------------------------------------------------

struct GenerateArgs {
    std::string preset;
    std::string family;
    int n = 0;
    int k = 0;
    std::string polarity = "both";
    std::string ordering = "both";
    std::uint64_t seed = 0;
    std::string out;
    std::optional<std::size_t> chainBreak;
    std::optional<std::size_t> dagBreak;
};

int doGenerate(const GenerateArgs& a, const RenderConfig& render, std::ostream& out) {
    std::vector<FamilySpec> specs;
    if (!a.preset.empty()) {
        if (!a.family.empty()) throw UsageError("--preset and --family are mutually exclusive");
        specs = paperPreset();
    } else {
        if (a.family.empty() || a.n == 0) throw UsageError("--family and --n are required without --preset");
        auto f = familyFromString(a.family);
        if (!f) throw UsageError("unknown family '" + a.family + "'");
        FamilySpec spec{*f, a.n, std::nullopt};
        if (familyTakesK(*f)) {
            if (a.k == 0) throw UsageError(a.family + " needs --k");
            spec.k = a.k;
        }
        specs.push_back(spec);
    }

    std::vector<CaseSetting> settings;
    for (const auto& s : paperSettings(a.seed)) {
        const bool polOk = a.polarity == "both" || a.polarity == toString(s.polarity);
        const bool ordOk = a.ordering == "both" || a.ordering == toString(s.ordering);
        if (polOk && ordOk) settings.push_back(s);
    }

    VariantOptions opts;
    opts.chainBreakIndex = a.chainBreak;
    opts.dagBreakIndex = a.dagBreak;
    fs::create_directories(a.out);
    for (const auto& spec : specs) {
        validate(spec);
        for (const auto& setting : settings) {
            auto c = emitCase(spec, setting, a.out, opts, render);
            out << c.id() << "\t" << toString(c.expected) << "\n";
        }
    }
    return kExitOk;
}

// --- eval / report --------------------------------------------------------

struct EvalArgs {
    std::string cases;
    std::string config;
    std::string offline;
    std::string out = "runs";
    std::string runId;
};

// Offline runs stamp records with a constant so reruns are byte-identical.
constexpr const char* kOfflineTimestamp = "1970-01-01T00:00:00Z";

std::string compactTimestamp() {
    auto s = harness::utcNow();
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '-' || c == ':'; }), s.end());
    return s;
}

void writeReports(const fs::path& dir, const std::vector<harness::RunRecord>& records, std::ostream& out) {
    const auto table = harness::buildReport(records);
    const auto text = harness::formatText(table);
    writeFile(dir / "report.txt", text);
    writeFile(dir / "report.csv", harness::formatCsv(table));
    out << text;
}

int doEval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    const auto cfg = harness::loadConfig(a.config);
    auto opts = harness::runOptionsFrom(cfg);

    std::vector<LoadedCase> cases;
    for (const auto& dir : listCases(a.cases)) cases.push_back(loadCase(dir));
    if (cases.empty()) throw std::runtime_error(a.cases + ": no benchmark cases found");

    std::unique_ptr<harness::ChatTransport> transport;
    std::string runId = a.runId;
    if (!a.offline.empty()) {
        if (!fs::is_directory(a.offline)) throw std::runtime_error(a.offline + ": not a directory");
        transport = std::make_unique<harness::FixtureTransport>(a.offline);
        opts.clock = [] { return std::string(kOfflineTimestamp); };
        if (runId.empty()) runId = "offline";
    } else {
        transport = std::make_unique<harness::HttpChatTransport>(cfg.endpoint);
        if (runId.empty()) runId = compactTimestamp();
    }

    const auto runDir = fs::path(a.out) / runId;
    fs::create_directories(runDir);
    const auto sink = runDir / "records.jsonl";
    auto records = harness::runCases(cases, *transport, opts, &sink);
    for (const auto& r : records) {
        if (r.expectedMismatch) err << "warning: " << r.caseId << ": " << *r.expectedMismatch << "\n";
        if (r.error) err << "warning: " << r.caseId << ": " << *r.error << "\n";
    }

    // Report over everything in the store, so appended reruns supersede.
    writeReports(runDir, harness::readRecords(sink), out);
    err << "records: " << sink.string() << "\n";
    return kExitOk;
}

int doReport(const std::string& runDir, bool csv, std::ostream& out) {
    const auto records = harness::readRecords(fs::path(runDir) / "records.jsonl");
    const auto table = harness::buildReport(records);
    out << (csv ? harness::formatCsv(table) : harness::formatText(table));
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Defeasible logic benchmark toolkit", "dlbench"};
    app.require_subcommand(1);

    RenderConfig render;
    auto addRender = [&](CLI::App* cmd) {
        cmd->add_option("--noun", render.categoryNoun, "Category noun")->capture_default_str();
        cmd->add_option("--article", render.article, "Article before the noun")->capture_default_str();
    };

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Emit benchmark cases");
    generate->add_option("--preset", gen.preset, "Named case matrix (eight fixed instances)")->check(CLI::IsMember({"paper"}));
    generate->add_option("--family", gen.family, "chain, chains, circle, circles, dag, levels-, levels, hierarchies");
    generate->add_option("--n", gen.n, "Size parameter")->check(CLI::PositiveNumber);
    generate->add_option("--k", gen.k, "Branching parameter (dag, hierarchies)")->check(CLI::PositiveNumber);
    generate->add_option("--polarity", gen.polarity)
        ->check(CLI::IsMember({"provable", "unprovable", "both"}))
        ->capture_default_str();
    generate->add_option("--ordering", gen.ordering)
        ->check(CLI::IsMember({"sequential", "random", "both"}))
        ->capture_default_str();
    generate->add_option("--seed", gen.seed, "Shuffle seed for random ordering")->capture_default_str();
    generate->add_option("--out", gen.out, "Output directory")->required();
    generate->add_option("--chain-break", gen.chainBreak, "Atom index renamed in chain(s) variants");
    generate->add_option("--dag-break", gen.dagBreak, "Atom index renamed in dag variants");
    addRender(generate);

    ReasonArgs reason;
    auto* reasonCmd = app.add_subcommand("reason", "Compute conclusions of a .dfl theory");
    reasonCmd->add_option("file", reason.file, "Theory file")->required();
    reasonCmd->add_option("--query", reason.query, "Literal to query, e.g. A0000000 or -A0000000");
    reasonCmd->add_flag("--explain", reason.explain, "Print a derivation for the queried literal");
    reasonCmd->add_flag("--json", reason.json, "Emit JSON");

    std::string translateFile;
    auto* translate = app.add_subcommand("translate", "Render a .dfl theory as English");
    translate->add_option("file", translateFile, "Theory file")->required();
    addRender(translate);

    EvalArgs eval;
    auto* evalCmd = app.add_subcommand("eval", "Prompt a chat model on generated cases");
    evalCmd->add_option("--cases", eval.cases, "Directory of generated cases")->required();
    evalCmd->add_option("--config", eval.config, "Harness configuration file")->required();
    evalCmd->add_option("--offline", eval.offline, "Directory of fixture transcripts; no network");
    evalCmd->add_option("--out", eval.out, "Root of run directories")->capture_default_str();
    evalCmd->add_option("--run-id", eval.runId, "Run directory name");

    std::string reportRun;
    bool reportCsv = false;
    auto* reportCmd = app.add_subcommand("report", "Summarise a run as a theory x setting table");
    reportCmd->add_option("--run", reportRun, "Run directory holding records.jsonl")->required();
    reportCmd->add_flag("--csv", reportCsv, "Emit CSV instead of aligned text");

    auto* selftestCmd = app.add_subcommand("selftest", "Run the built-in golden and oracle checks");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitUsage;
    }

    try {
        if (*generate) return doGenerate(gen, render, out);
        if (*reasonCmd) return doReason(reason, out, err);
        if (*translate) return doTranslate(translateFile, render, out, err);
        if (*evalCmd) return doEval(eval, out, err);
        if (*reportCmd) return doReport(reportRun, reportCsv, out);
        if (*selftestCmd) return selftest(out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace dlbench::cli
