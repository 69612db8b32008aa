#include "dlbench/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dlbench/parser.hpp"

namespace dlbench {

using json = nlohmann::json;

std::string_view familyName(Family f) noexcept {
    switch (f) {
        case Family::Chain: return "chain";
        case Family::Chains: return "chains";
        case Family::Circle: return "circle";
        case Family::Circles: return "circles";
        case Family::Dag: return "dag";
        case Family::LevelsMinus: return "levels-";
        case Family::Levels: return "levels";
        case Family::Hierarchies: return "hierarchies";
    }
    return "chain";
}

std::string_view familyToken(Family f) noexcept {
    return f == Family::LevelsMinus ? "levels-minus" : familyName(f);
}

std::optional<Family> familyFromString(std::string_view s) noexcept {
    if (s == "levelsMinus") return Family::LevelsMinus;
    for (Family f : kAllFamilies) {
        if (s == familyName(f) || s == familyToken(f)) return f;
    }
    return std::nullopt;
}

bool familyTakesK(Family f) noexcept { return f == Family::Dag || f == Family::Hierarchies; }

std::string label(const FamilySpec& spec) {
    std::string out(familyName(spec.family));
    out += "(" + std::to_string(spec.n);
    if (familyTakesK(spec.family) && spec.k) out += "," + std::to_string(*spec.k);
    return out + ")";
}

void validate(const FamilySpec& spec) {
    if (spec.n < 1) throw GeneratorError(GeneratorErrc::InvalidSpec, label(spec) + ": n must be positive");
    if (!familyTakesK(spec.family)) return;
    if (!spec.k) throw GeneratorError(GeneratorErrc::InvalidSpec, label(spec) + ": k is required");
    if (*spec.k < 1) throw GeneratorError(GeneratorErrc::InvalidSpec, label(spec) + ": k must be positive");
    if (spec.family == Family::Hierarchies && *spec.k % 2 != 0) {
        throw GeneratorError(GeneratorErrc::InvalidSpec, label(spec) + ": k must be even");
    }
}

std::string atomName(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "A%07zu", index);
    return buf;
}

std::string breakAtomName(std::size_t index) {
    std::string name = atomName(index);
    const auto firstDigit = name.find_first_not_of('0', 1);
    const auto end = std::min(firstDigit == std::string::npos ? name.size() : firstDigit, name.size() - 1);
    for (std::size_t i = 1; i < end; ++i) name[i] = '1';
    return name;
}

namespace {

Literal pos(std::size_t i) { return positive(atomName(i)); }
Literal neg(std::size_t i) { return negative(atomName(i)); }

struct Draft {
    std::vector<Literal> facts;
    std::vector<Rule> rules;
    std::vector<SuperiorityPair> sup;
    std::vector<std::size_t> anchors;

    std::string add(std::vector<Literal> body, Literal head, RuleKind kind) {
        std::string lbl = "r" + std::to_string(rules.size() + 1);
        rules.push_back(Rule{lbl, std::move(body), std::move(head), kind});
        return lbl;
    }
    void prefer(std::string superior, std::string inferior) {
        sup.push_back({std::move(superior), std::move(inferior)});
        anchors.push_back(rules.size());
    }
    Theory build() { return Theory::build(std::move(facts), std::move(rules), std::move(sup), std::move(anchors)); }
};

Draft draftOf(const Theory& t) {
    return Draft{t.facts(), t.rules(), t.superiority(), t.superiorityAnchors()};
}

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

}  // namespace

Theory generate(const FamilySpec& spec) {
    validate(spec);
    const auto n = static_cast<std::size_t>(spec.n);
    Draft d;

    switch (spec.family) {
        case Family::Chain:
        case Family::Chains: {
            const auto kind = spec.family == Family::Chains ? RuleKind::Strict : RuleKind::Defeasible;
            d.facts.push_back(pos(n));
            for (std::size_t i = 1; i <= n; ++i) d.add({pos(n - i + 1)}, pos(n - i), kind);
            break;
        }
        case Family::Circle:
        case Family::Circles: {
            const auto kind = spec.family == Family::Circles ? RuleKind::Strict : RuleKind::Defeasible;
            for (std::size_t i = 1; i <= n; ++i) d.add({pos(i - 1)}, pos(i % n), kind);
            break;
        }
        case Family::Dag: {
            const auto k = static_cast<std::size_t>(*spec.k);
            const auto depth = n * k;
            for (std::size_t i = depth + k; i > depth; --i) d.facts.push_back(pos(i));
            for (std::size_t m = 1; m <= depth + 1; ++m) {
                const auto head = depth + 1 - m;
                std::vector<Literal> body;
                for (std::size_t b = head + k; b > head; --b) body.push_back(pos(b));
                d.add(std::move(body), pos(head), RuleKind::Defeasible);
            }
            break;
        }
        case Family::LevelsMinus:
        case Family::Levels: {
            for (std::size_t i = n; i-- > 0;) {
                auto support = d.add({}, pos(i), RuleKind::Defeasible);
                auto attack = d.add({pos(i + 1)}, neg(i), RuleKind::Defeasible);
                if (spec.family == Family::Levels && i % 2 == 1) d.prefer(attack, support);
            }
            break;
        }
        case Family::Hierarchies: {
            const auto k = static_cast<std::size_t>(*spec.k);
            std::size_t internal = 0;
            for (int i = 0; i < spec.n; ++i) internal += ipow(k, i);
            const std::size_t total = internal + ipow(k, spec.n);
            for (std::size_t leaf = total; leaf-- > internal;) d.facts.push_back(pos(leaf));
            // Children of node b are k*b+1 .. k*b+k, taken in descending order.
            for (std::size_t b = internal; b-- > 0;) {
                std::vector<std::string> labels;
                for (std::size_t j = 1; j <= k; ++j) {
                    const auto child = k * b + k + 1 - j;
                    labels.push_back(d.add({pos(child)}, j <= k / 2 ? pos(b) : neg(b), RuleKind::Defeasible));
                }
                for (std::size_t j = 0; j < k / 2; ++j) d.prefer(labels[j], labels[k / 2 + j]);
            }
            break;
        }
    }
    return d.build();
}

std::string_view toString(Polarity p) noexcept { return p == Polarity::Provable ? "provable" : "unprovable"; }
std::string_view toString(Ordering o) noexcept { return o == Ordering::Sequential ? "sequential" : "random"; }

std::string settingLabel(Polarity p, Ordering o) {
    std::string out = p == Polarity::Provable ? "+∂-" : "-∂-";
    return out + (o == Ordering::Sequential ? "seq" : "rand");
}

namespace {

bool mentionsAtom(const Theory& t, const std::string& name) {
    return t.find(positive(name)).has_value();
}

void requireFresh(const Theory& t, const std::string& name) {
    if (mentionsAtom(t, name)) {
        throw GeneratorError(GeneratorErrc::FreshAtomCollision, "break atom " + name + " already occurs in theory");
    }
}

Theory renameBodyOccurrences(const Theory& base, std::size_t index, std::optional<std::size_t> onlyHead) {
    const auto from = atomName(index);
    const auto to = breakAtomName(index);
    requireFresh(base, to);
    Draft d = draftOf(base);
    bool renamed = false;
    for (auto& r : d.rules) {
        if (onlyHead && r.head.atom.name() != atomName(*onlyHead)) continue;
        for (auto& b : r.body) {
            if (b.atom.name() == from) {
                b = Literal{Atom{to}, b.positive};
                renamed = true;
            }
        }
    }
    if (!renamed) {
        throw GeneratorError(GeneratorErrc::InvalidSpec, "no body occurrence of " + from + " to rename");
    }
    return d.build();
}

Theory withFact(const Theory& base, std::size_t index) {
    Draft d = draftOf(base);
    d.facts.push_back(pos(index));
    return d.build();
}

bool satisfies(Verdict v, Polarity p) { return (v == Verdict::ProvablyTrue) == (p == Polarity::Provable); }

}  // namespace

Theory makeVariant(const Theory& base, const FamilySpec& spec, Polarity polarity, const VariantOptions& opts) {
    validate(spec);
    const auto n = static_cast<std::size_t>(spec.n);
    const Literal goal = pos(0);
    Theory out = base;

    if (!satisfies(query(base, goal), polarity)) {
        switch (spec.family) {
            case Family::Chain:
            case Family::Chains: {
                if (polarity == Polarity::Unprovable) {
                    const auto half = n / 2;
                    const std::size_t j = opts.chainBreakIndex.value_or(half >= 2 ? half - 1 : 1);
                    if (j < 1 || j > n) {
                        throw GeneratorError(GeneratorErrc::InvalidSpec, "chain break index out of range");
                    }
                    out = renameBodyOccurrences(base, j, j - 1);
                }
                break;
            }
            case Family::Dag: {
                if (polarity == Polarity::Unprovable) {
                    const auto depth = n * static_cast<std::size_t>(*spec.k);
                    const std::size_t j = opts.dagBreakIndex.value_or((depth + 1) / 2 + 1);
                    out = renameBodyOccurrences(base, j, std::nullopt);
                }
                break;
            }
            case Family::Circle:
            case Family::Circles:
                if (polarity == Polarity::Provable) out = withFact(base, n - 1);
                break;
            case Family::LevelsMinus:
            case Family::Levels:
                out = withFact(base, n);
                break;
            case Family::Hierarchies: {
                if (polarity == Polarity::Unprovable) {
                    const auto k = static_cast<std::size_t>(*spec.k);
                    std::size_t node = 0;
                    for (int level = 0; level < spec.n; ++level) node = k * node + k;
                    out = renameBodyOccurrences(base, node, std::nullopt);
                }
                break;
            }
        }
    }

    const auto verdict = query(out, goal);
    if (!satisfies(verdict, polarity)) {
        throw GeneratorError(GeneratorErrc::VariantUnsatisfied,
                             label(spec) + " " + std::string(toString(polarity)) + " variant yields " +
                                 std::string(toString(verdict)));
    }
    return out;
}

std::string caseId(const FamilySpec& spec, const CaseSetting& setting) {
    std::string id(familyToken(spec.family));
    id += "_" + std::to_string(spec.n);
    if (familyTakesK(spec.family) && spec.k) id += "-" + std::to_string(*spec.k);
    id += setting.polarity == Polarity::Provable ? "_pos" : "_neg";
    id += setting.ordering == Ordering::Sequential ? "_seq_0" : "_rand_" + std::to_string(setting.shuffleSeed);
    return id;
}

std::string BenchmarkCase::id() const { return caseId(spec, setting); }

std::vector<std::size_t> shufflePermutation(std::size_t size, std::uint64_t seed) {
    std::vector<std::size_t> perm(size);
    for (std::size_t i = 0; i < size; ++i) perm[i] = i;
    std::mt19937_64 rng(seed);
    // Unbiased bounded draw by rejection; std::uniform_int_distribution is
    // not reproducible across standard libraries.
    auto below = [&](std::uint64_t bound) {
        const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound);
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        return x % bound;
    };
    for (std::size_t i = size; i > 1; --i) std::swap(perm[i - 1], perm[below(i)]);
    return perm;
}

BenchmarkCase makeCase(const FamilySpec& spec, const CaseSetting& setting, const VariantOptions& opts,
                       const RenderConfig& render) {
    BenchmarkCase c;
    c.spec = spec;
    c.setting = setting;
    if (setting.ordering == Ordering::Sequential) c.setting.shuffleSeed = 0;
    c.theory = makeVariant(generate(spec), spec, setting.polarity, opts);
    auto sentences = renderTheory(c.theory, render).sentences;
    if (setting.ordering == Ordering::Random) {
        auto perm = shufflePermutation(sentences.size(), setting.shuffleSeed);
        std::vector<std::string> shuffled;
        shuffled.reserve(sentences.size());
        for (auto i : perm) shuffled.push_back(sentences[i]);
        sentences = std::move(shuffled);
    }
    c.nlText = std::move(sentences);
    c.expected = query(c.theory, positive(c.queryAtom));
    return c;
}

namespace {

void writeFile(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

BenchmarkCase emitCase(const FamilySpec& spec, const CaseSetting& setting, const std::filesystem::path& root,
                       const VariantOptions& opts, const RenderConfig& render) {
    auto c = makeCase(spec, setting, opts, render);
    const auto dir = root / c.id();
    std::filesystem::create_directories(dir);

    writeFile(dir / "theory.dfl", printTheory(c.theory));
    std::string knowledge;
    for (const auto& s : c.nlText) knowledge += s + "\n";
    writeFile(dir / "knowledge.txt", knowledge);

    json meta = {
        {"case_id", c.id()},
        {"family", familyName(spec.family)},
        {"n", spec.n},
        {"k", familyTakesK(spec.family) && spec.k ? json(*spec.k) : json(nullptr)},
        {"theory", label(spec)},
        {"polarity", toString(c.setting.polarity)},
        {"ordering", toString(c.setting.ordering)},
        {"seed", c.setting.shuffleSeed},
        {"setting", settingLabel(c.setting.polarity, c.setting.ordering)},
        {"expected", toString(c.expected)},
        {"query_atom", c.queryAtom},
        {"category_noun", render.categoryNoun},
        {"article", render.article},
    };
    writeFile(dir / "meta.json", meta.dump(2) + "\n");
    return c;
}

LoadedCase loadCase(const std::filesystem::path& dir) {
    LoadedCase out;
    out.directory = dir;
    json meta;
    try {
        meta = json::parse(readFile(dir / "meta.json"));
    } catch (const json::exception& e) {
        throw std::runtime_error((dir / "meta.json").string() + ": " + e.what());
    }

    auto& c = out.benchmark;
    try {
        auto family = familyFromString(meta.at("family").get<std::string>());
        if (!family) throw std::runtime_error("unknown family " + meta.at("family").get<std::string>());
        c.spec.family = *family;
        c.spec.n = meta.at("n").get<int>();
        if (meta.contains("k") && !meta.at("k").is_null()) c.spec.k = meta.at("k").get<int>();
        c.setting.polarity =
            meta.at("polarity").get<std::string>() == "provable" ? Polarity::Provable : Polarity::Unprovable;
        c.setting.ordering =
            meta.at("ordering").get<std::string>() == "sequential" ? Ordering::Sequential : Ordering::Random;
        c.setting.shuffleSeed = meta.value("seed", std::uint64_t{0});
        c.queryAtom = meta.value("query_atom", std::string("A0000000"));
        if (meta.contains("expected")) out.recordedExpected = verdictFromString(meta.at("expected").get<std::string>());
    } catch (const json::exception& e) {
        throw std::runtime_error((dir / "meta.json").string() + ": " + e.what());
    }

    auto parsed = parseTheory(readFile(dir / "theory.dfl"));
    if (!parsed.ok()) {
        std::string msg = (dir / "theory.dfl").string() + ": does not parse";
        for (const auto& d : parsed.diagnostics) msg += "\n  " + toString(d);
        throw std::runtime_error(msg);
    }
    c.theory = std::move(*parsed.theory);

    std::istringstream knowledge(readFile(dir / "knowledge.txt"));
    for (std::string line; std::getline(knowledge, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        c.nlText.push_back(line);
    }
    c.expected = query(c.theory, positive(c.queryAtom));
    return out;
}

std::vector<std::filesystem::path> listCases(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::is_directory(root)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "meta.json")) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FamilySpec> paperPreset() {
    return {
        {Family::Chain, 8, std::nullopt},  {Family::Chains, 8, std::nullopt},      {Family::Circle, 8, std::nullopt},
        {Family::Circles, 8, std::nullopt}, {Family::Dag, 3, 2},                   {Family::LevelsMinus, 5, std::nullopt},
        {Family::Levels, 5, std::nullopt}, {Family::Hierarchies, 2, 4},
    };
}

std::vector<CaseSetting> paperSettings(std::uint64_t seed) {
    return {
        {Polarity::Unprovable, Ordering::Random, seed},
        {Polarity::Provable, Ordering::Random, seed},
        {Polarity::Unprovable, Ordering::Sequential, 0},
        {Polarity::Provable, Ordering::Sequential, 0},
    };
}

}  // namespace dlbench
