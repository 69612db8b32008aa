#include "dlbench/harness/verdict.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dlbench::harness {

std::string_view toString(Extracted e) noexcept {
    switch (e) {
        case Extracted::Affirmative: return "Affirmative";
        case Extracted::Negative: return "Negative";
        case Extracted::NoConclusion: return "NoConclusion";
        case Extracted::Unparseable: return "Unparseable";
    }
    return "Unparseable";
}

std::string_view toString(Grade g) noexcept {
    switch (g) {
        case Grade::Correct: return "Correct";
        case Grade::Error: return "Error";
        case Grade::Unparseable: return "Unparseable";
    }
    return "Unparseable";
}

std::string_view toString(GradingMode m) noexcept {
    return m == GradingMode::PaperBinary ? "PaperBinary" : "StrictTernary";
}

std::optional<Extracted> extractedFromString(std::string_view s) noexcept {
    for (auto e : {Extracted::Affirmative, Extracted::Negative, Extracted::NoConclusion, Extracted::Unparseable}) {
        if (toString(e) == s) return e;
    }
    return std::nullopt;
}

std::optional<Grade> gradeFromString(std::string_view s) noexcept {
    for (auto g : {Grade::Correct, Grade::Error, Grade::Unparseable}) {
        if (toString(g) == s) return g;
    }
    return std::nullopt;
}

std::optional<GradingMode> gradingModeFromString(std::string_view s) noexcept {
    if (s == "paper" || s == "PaperBinary") return GradingMode::PaperBinary;
    if (s == "strict" || s == "StrictTernary") return GradingMode::StrictTernary;
    return std::nullopt;
}

CueLexicon CueLexicon::defaults() {
    CueLexicon lex;
    lex.version = "1";
    lex.negative = {
        "{atom} is not",
        "{atom} isn't",
        "{atom} is also not",
        "{atom} is therefore not",
        "{atom} is thus not",
        "{atom} would not be",
        "{atom} does not qualify",
        "answer is no",
        "^no,",
        "^no.",
        "^no$",
    };
    lex.noConclusion = {
        "cannot conclude",
        "cannot be concluded",
        "can't conclude",
        "cannot determine",
        "cannot be determined",
        "can't determine",
        "cannot be definitively",
        "cannot definitively",
        "cannot be inferred",
        "cannot infer",
        "cannot be proven",
        "cannot be proved",
        "cannot say",
        "no conclusion",
        "not possible to determine",
        "not possible to conclude",
        "undetermined",
        "indeterminate",
        "inconclusive",
        "not enough information",
        "insufficient information",
        "remains unknown",
        "neither",
    };
    lex.affirmative = {
        "{atom} is {article} {noun}",
        "{atom} is indeed {article} {noun}",
        "{atom} is typically {article} {noun}",
        "{atom} is defeasibly {article} {noun}",
        "{atom} is also {article} {noun}",
        "{atom} must be {article} {noun}",
        "is {article} {noun}",
        "^yes",
    };
    return lex;
}

CueLexicon CueLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read cue lexicon " + path.string());
    try {
        auto j = nlohmann::json::parse(in);
        CueLexicon lex;
        lex.version = j.at("version").get<std::string>();
        lex.negative = j.at("negative").get<std::vector<std::string>>();
        lex.noConclusion = j.at("no_conclusion").get<std::vector<std::string>>();
        lex.affirmative = j.at("affirmative").get<std::vector<std::string>>();
        return lex;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed cue lexicon " + path.string() + ": " + e.what());
    }
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool isWordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Lowercase, markdown emphasis and heading markers removed, curly quotes and
// apostrophes folded to ASCII, whitespace runs collapsed (newlines kept).
std::string normalize(std::string_view text) {
    std::string s(text);
    auto fold = [&](std::string_view from, std::string_view to) {
        for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
            s.replace(p, from.size(), to);
        }
    };
    fold("\xE2\x80\x99", "'");
    fold("\xE2\x80\x98", "'");
    fold("\xE2\x80\x9C", "\"");
    fold("\xE2\x80\x9D", "\"");
    std::string out;
    for (char c : s) {
        if (c == '*' || c == '#' || c == '`') continue;
        if (c == '\t' || c == '\r') c = ' ';
        if (c == ' ' && !out.empty() && (out.back() == ' ' || out.back() == '\n')) continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string finalParagraph(const std::string& text) {
    std::vector<std::string> paragraphs;
    std::string current;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (trim(line).empty()) {
            if (!trim(current).empty()) paragraphs.push_back(current);
            current.clear();
            continue;
        }
        current += line + "\n";
    }
    if (!trim(current).empty()) paragraphs.push_back(current);
    return paragraphs.empty() ? std::string{} : paragraphs.back();
}

std::vector<std::string> sentences(const std::string& paragraph) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < paragraph.size(); ++i) {
        char c = paragraph[i];
        if (c == '\n') {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
            continue;
        }
        cur.push_back(c);
        const bool boundary = (c == '.' || c == '!' || c == '?' || c == ':') &&
                              (i + 1 == paragraph.size() || paragraph[i + 1] == ' ' || paragraph[i + 1] == '\n');
        if (boundary) {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

bool matches(const std::string& sentence, const std::string& cue) {
    if (cue.empty()) return false;
    if (cue.front() == '^') {
        const bool whole = cue.size() > 1 && cue.back() == '$';
        const std::string body = cue.substr(1, cue.size() - (whole ? 2 : 1));
        std::size_t start = sentence.find_first_not_of(" \"'(-");
        if (start == std::string::npos || sentence.compare(start, body.size(), body) != 0) return false;
        const auto rest = start + body.size();
        if (whole) return sentence.find_first_not_of(" .!\"')", rest) == std::string::npos;
        return rest == sentence.size() || !isWordChar(sentence[rest]) || !isWordChar(body.back());
    }
    for (auto p = sentence.find(cue); p != std::string::npos; p = sentence.find(cue, p + 1)) {
        const bool leftOk = p == 0 || !isWordChar(sentence[p - 1]) || !isWordChar(cue.front());
        const auto end = p + cue.size();
        const bool rightOk = end == sentence.size() || !isWordChar(sentence[end]) || !isWordChar(cue.back());
        if (leftOk && rightOk) return true;
    }
    return false;
}

std::vector<std::string> instantiate(const std::vector<std::string>& cues, const ExtractionContext& ctx) {
    std::vector<std::string> out;
    for (auto cue : cues) {
        cue = lower(cue);
        for (auto [key, value] : {std::pair{std::string("{atom}"), lower(ctx.atom)},
                                  std::pair{std::string("{article}"), lower(ctx.article)},
                                  std::pair{std::string("{noun}"), lower(ctx.noun)}}) {
            for (auto p = cue.find(key); p != std::string::npos; p = cue.find(key, p + value.size())) {
                cue.replace(p, key.size(), value);
            }
        }
        out.push_back(std::move(cue));
    }
    return out;
}

}  // namespace

Extracted extractVerdict(std::string_view response, const CueLexicon& lexicon, const ExtractionContext& ctx) {
    const auto paragraph = finalParagraph(normalize(response));
    if (paragraph.empty()) return Extracted::Unparseable;

    auto all = sentences(paragraph);
    const auto atom = lower(ctx.atom);
    std::vector<std::string> candidates;
    std::copy_if(all.begin(), all.end(), std::back_inserter(candidates),
                 [&](const std::string& s) { return s.find(atom) != std::string::npos; });
    if (candidates.empty()) candidates = std::move(all);

    const std::pair<Extracted, std::vector<std::string>> classes[] = {
        {Extracted::Negative, instantiate(lexicon.negative, ctx)},
        {Extracted::NoConclusion, instantiate(lexicon.noConclusion, ctx)},
        {Extracted::Affirmative, instantiate(lexicon.affirmative, ctx)},
    };
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        for (const auto& [verdict, cues] : classes) {
            if (std::any_of(cues.begin(), cues.end(), [&](const std::string& c) { return matches(*it, c); })) {
                return verdict;
            }
        }
    }
    return Extracted::Unparseable;
}

Extracted extractForcedChoice(std::string_view reply) {
    const auto s = normalize(reply);
    if (matches(s, "cannot conclude")) return Extracted::NoConclusion;
    if (matches(s, "yes")) return Extracted::Affirmative;
    if (matches(s, "no")) return Extracted::Negative;
    return Extracted::Unparseable;
}

Grade grade(Extracted extracted, Verdict expected, GradingMode mode) {
    if (extracted == Extracted::Unparseable) return Grade::Unparseable;
    bool correct = false;
    if (expected == Verdict::ProvablyTrue) {
        correct = extracted == Extracted::Affirmative;
    } else if (mode == GradingMode::PaperBinary) {
        correct = extracted == Extracted::Negative || extracted == Extracted::NoConclusion;
    } else {
        correct = extracted == (expected == Verdict::ProvablyFalse ? Extracted::Negative : Extracted::NoConclusion);
    }
    return correct ? Grade::Correct : Grade::Error;
}

}  // namespace dlbench::harness
