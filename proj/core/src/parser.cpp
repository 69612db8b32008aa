#include "dlbench/parser.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <utility>

namespace dlbench {

namespace {

enum class Tok { Ident, Minus, Comma, Colon, Gt, FactMark, Arrow, Bad };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
    RuleKind arrow = RuleKind::Defeasible;
};

bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        std::size_t col = i + 1;
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        char next = i + 1 < line.size() ? line[i + 1] : '\0';
        if (c == '>' && next == '>') {
            out.push_back({Tok::FactMark, ">>", col});
            i += 2;
        } else if (c == '-' && next == '>') {
            out.push_back({Tok::Arrow, "->", col, RuleKind::Strict});
            i += 2;
        } else if (c == '=' && next == '>') {
            out.push_back({Tok::Arrow, "=>", col, RuleKind::Defeasible});
            i += 2;
        } else if (c == '~' && next == '>') {
            out.push_back({Tok::Arrow, "~>", col, RuleKind::Defeater});
            i += 2;
        } else if (c == '>') {
            out.push_back({Tok::Gt, ">", col});
            ++i;
        } else if (c == '-') {
            out.push_back({Tok::Minus, "-", col});
            ++i;
        } else if (c == ',') {
            out.push_back({Tok::Comma, ",", col});
            ++i;
        } else if (c == ':') {
            out.push_back({Tok::Colon, ":", col});
            ++i;
        } else if (identChar(c)) {
            std::size_t j = i;
            while (j < line.size() && identChar(line[j])) ++j;
            out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
            i = j;
        } else {
            out.push_back({Tok::Bad, std::string(1, c), col});
            ++i;
        }
    }
    return out;
}

struct LineParser {
    const std::vector<Token>& toks;
    std::size_t lineNo;
    std::size_t endColumn;
    std::size_t pos = 0;
    std::optional<ParseDiagnostic> error{};

    bool atEnd() const { return pos >= toks.size(); }
    const Token* peek() const { return atEnd() ? nullptr : &toks[pos]; }

    void fail(std::string msg) {
        if (error) return;
        std::size_t col = atEnd() ? endColumn : toks[pos].column;
        error = ParseDiagnostic{lineNo, col, std::move(msg), Severity::Error};
    }

    bool expect(Tok kind, const char* what) {
        if (!atEnd() && toks[pos].kind == kind) {
            ++pos;
            return true;
        }
        fail(std::string("expected ") + what + (atEnd() ? " at end of line" : ", found '" + toks[pos].text + "'"));
        return false;
    }

    std::optional<std::string> label() {
        if (atEnd() || toks[pos].kind != Tok::Ident) {
            fail(atEnd() ? "expected rule label at end of line" : "expected rule label, found '" + toks[pos].text + "'");
            return std::nullopt;
        }
        return toks[pos++].text;
    }

    std::optional<Literal> literal() {
        bool pos_ = true;
        if (!atEnd() && toks[pos].kind == Tok::Minus) {
            pos_ = false;
            ++pos;
        }
        if (atEnd() || toks[pos].kind != Tok::Ident) {
            fail(atEnd() ? "expected literal at end of line" : "expected literal, found '" + toks[pos].text + "'");
            return std::nullopt;
        }
        const auto& name = toks[pos].text;
        if (!Atom::isValidName(name)) {
            fail("invalid atom name '" + name + "'");
            return std::nullopt;
        }
        ++pos;
        return Literal{Atom{name}, pos_};
    }

    void expectEnd() {
        if (!atEnd()) fail("unexpected '" + toks[pos].text + "' after statement");
    }
};

}  // namespace

std::string toString(const ParseDiagnostic& d) {
    return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
           (d.severity == Severity::Error ? "error: " : "warning: ") + d.message;
}

ParseResult parseTheory(std::string_view text) {
    ParseResult result;
    std::vector<Literal> facts;
    std::vector<std::size_t> factLines;
    std::vector<Rule> rules;
    std::vector<std::size_t> ruleLines;
    std::vector<SuperiorityPair> sup;
    std::vector<std::size_t> supLines;
    std::vector<std::size_t> anchors;
    std::unordered_map<std::string, std::size_t> labelLines;
    bool hadError = false;

    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::size_t lineNo = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineNo;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

        auto toks = tokenize(raw);
        if (toks.empty()) continue;
        LineParser p{toks, lineNo, raw.size() + 1, 0, std::nullopt};

        for (const auto& t : toks) {
            if (t.kind == Tok::Bad) {
                p.pos = static_cast<std::size_t>(&t - toks.data());
                p.fail("unexpected character '" + t.text + "'");
                break;
            }
        }

        if (!p.error && toks[0].kind == Tok::FactMark) {
            p.pos = 1;
            auto lit = p.literal();
            p.expectEnd();
            if (lit && !p.error) {
                if (std::find(facts.begin(), facts.end(), *lit) != facts.end()) {
                    result.diagnostics.push_back(
                        {lineNo, toks[0].column, "duplicate fact " + toString(*lit) + " dropped", Severity::Warning});
                }
                facts.push_back(*lit);
                factLines.push_back(lineNo);
            }
        } else if (!p.error && toks.size() >= 2 && toks[0].kind == Tok::Ident && toks[1].kind == Tok::Gt) {
            auto superior = p.label();
            p.expect(Tok::Gt, "'>'");
            auto inferior = p.label();
            p.expectEnd();
            if (!p.error) {
                if (std::find(sup.begin(), sup.end(), SuperiorityPair{*superior, *inferior}) != sup.end()) {
                    result.diagnostics.push_back({lineNo, toks[0].column,
                                                  "duplicate superiority " + *superior + " > " + *inferior + " dropped",
                                                  Severity::Warning});
                }
                sup.push_back({*superior, *inferior});
                supLines.push_back(lineNo);
                anchors.push_back(rules.size());
            }
        } else if (!p.error) {
            auto label = p.label();
            p.expect(Tok::Colon, "':' after rule label");
            std::vector<Literal> body;
            std::optional<RuleKind> kind;
            if (!p.error && p.peek() && p.peek()->kind == Tok::Arrow) {
                kind = p.peek()->arrow;
                ++p.pos;
            } else {
                while (!p.error) {
                    std::size_t litColumn = p.peek() ? p.peek()->column : p.endColumn;
                    auto lit = p.literal();
                    if (!lit) break;
                    if (std::find(body.begin(), body.end(), *lit) != body.end()) {
                        result.diagnostics.push_back({lineNo, litColumn,
                                                      "duplicate body literal " + toString(*lit) + " dropped",
                                                      Severity::Warning});
                    }
                    body.push_back(*lit);
                    if (p.peek() && p.peek()->kind == Tok::Comma) {
                        ++p.pos;
                        continue;
                    }
                    if (p.peek() && p.peek()->kind == Tok::Arrow) {
                        kind = p.peek()->arrow;
                        ++p.pos;
                    } else {
                        p.fail(p.atEnd() ? "expected arrow ('->', '=>' or '~>') at end of line"
                                         : "expected ',' or arrow, found '" + p.peek()->text + "'");
                    }
                    break;
                }
            }
            std::optional<Literal> head;
            if (!p.error) head = p.literal();
            p.expectEnd();
            if (!p.error) {
                if (auto [it, inserted] = labelLines.try_emplace(*label, lineNo); !inserted) {
                    result.diagnostics.push_back({lineNo, toks[0].column,
                                                  "duplicate rule label '" + *label + "' (first declared on line " +
                                                      std::to_string(it->second) + ")",
                                                  Severity::Error});
                    hadError = true;
                    continue;
                }
                rules.push_back(Rule{*label, std::move(body), *head, *kind});
                ruleLines.push_back(lineNo);
            }
        }

        if (p.error) {
            result.diagnostics.push_back(*p.error);
            hadError = true;
        }
    }

    for (std::size_t i = 0; i < sup.size(); ++i) {
        for (const auto* name : {&sup[i].superior, &sup[i].inferior}) {
            if (!labelLines.contains(*name)) {
                result.diagnostics.push_back(
                    {supLines[i], 1, "superiority refers to undeclared rule '" + *name + "'", Severity::Error});
                hadError = true;
            }
        }
    }
    if (hadError) return result;

    try {
        // Duplicates were already reported above with their positions.
        result.theory = Theory::build(std::move(facts), std::move(rules), std::move(sup), std::move(anchors));
    } catch (const TheoryError& e) {
        std::size_t line = 0;
        if (e.superiorityIndex()) line = supLines.at(*e.superiorityIndex());
        if (e.ruleIndex()) line = ruleLines.at(*e.ruleIndex());
        result.diagnostics.push_back({line, 1, e.what(), Severity::Error});
    }
    return result;
}

std::string printTheory(const Theory& t) {
    std::string out;
    for (const auto& f : t.facts()) out += ">> " + toString(f) + "\n";

    const auto& sup = t.superiority();
    const auto& anchors = t.superiorityAnchors();
    auto emitPriorities = [&](std::size_t anchor) {
        for (std::size_t i = 0; i < sup.size(); ++i) {
            if (anchors[i] == anchor) out += sup[i].superior + " > " + sup[i].inferior + "\n";
        }
    };

    emitPriorities(0);
    for (std::size_t i = 0; i < t.rules().size(); ++i) {
        const auto& r = t.rules()[i];
        out += r.label + ":";
        for (std::size_t j = 0; j < r.body.size(); ++j) out += (j == 0 ? " " : ", ") + toString(r.body[j]);
        out += " ";
        out += arrowOf(r.kind);
        out += " " + toString(r.head) + "\n";
        emitPriorities(i + 1);
    }
    return out;
}

}  // namespace dlbench
