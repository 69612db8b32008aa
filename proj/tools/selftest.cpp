#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "dlbench/generator.hpp"
#include "dlbench/parser.hpp"
#include "dlbench/random_theory.hpp"
#include "dlbench/reasoner.hpp"
#include "dlbench/translator.hpp"
#include "goldens.hpp"

namespace dlbench::cli {

namespace {

constexpr ProofTag kTags[] = {ProofTag::PlusDelta, ProofTag::MinusDelta, ProofTag::PlusPartial,
                              ProofTag::MinusPartial};

// Name of the first (tag, literal) where engine and oracle disagree, or "".
std::string firstMismatch(const Theory& t) {
    const auto c = computeConclusions(t);
    for (const auto& q : t.literals()) {
        for (auto tag : kTags) {
            if (c.has(tag, q) != bruteForceOracle(t, {tag, q})) return toString(TaggedLiteral{tag, q});
        }
    }
    return {};
}

// `dag_2-2` -> dag(2,2).
std::optional<FamilySpec> specFromGoldenName(std::string_view name) {
    const auto us = name.find('_');
    if (us == std::string_view::npos) return std::nullopt;
    auto family = familyFromString(name.substr(0, us));
    if (!family) return std::nullopt;
    FamilySpec spec{*family, 0, std::nullopt};
    std::string params(name.substr(us + 1));
    const auto dash = params.find('-');
    spec.n = std::stoi(params.substr(0, dash));
    if (dash != std::string::npos) spec.k = std::stoi(params.substr(dash + 1));
    return spec;
}

std::string joinLines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

}  // namespace

int selftest(std::ostream& out) {
    int failures = 0;
    auto report = [&](bool ok, const std::string& name, const std::string& detail = {}) {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !detail.empty()) out << ": " << detail;
        out << "\n";
        failures += ok ? 0 : 1;
    };

    for (const auto& g : embeddedGoldens()) {
        const std::string name(g.name);
        auto parsed = parseTheory(g.theory);
        if (!parsed.ok()) {
            report(false, "golden " + name, "does not parse");
            continue;
        }
        report(printTheory(*parsed.theory) == g.theory, "golden " + name + " print(parse) identity");
        report(joinLines(renderTheory(*parsed.theory).sentences) == g.translation, "golden " + name + " translation");
        if (auto spec = specFromGoldenName(name)) {
            report(printTheory(generate(*spec)) == g.theory, "golden " + name + " generator");
        } else {
            report(false, "golden " + name, "unrecognised family in file name");
        }
    }

    for (auto family : kAllFamilies) {
        for (int n = 1; n <= 3; ++n) {
            FamilySpec spec{family, n, familyTakesK(family) ? std::optional<int>(2) : std::nullopt};
            const auto bad = firstMismatch(generate(spec));
            report(bad.empty(), "oracle " + label(spec), bad);
        }
    }

    std::size_t randomMismatches = 0;
    std::string example;
    constexpr std::uint64_t kRandomTheories = 50;
    for (std::uint64_t seed = 0; seed < kRandomTheories; ++seed) {
        if (auto bad = firstMismatch(randomTheory(seed)); !bad.empty()) {
            if (randomMismatches++ == 0) example = "seed " + std::to_string(seed) + " " + bad;
        }
    }
    report(randomMismatches == 0, "oracle " + std::to_string(kRandomTheories) + " random theories", example);

    out << (failures == 0 ? "selftest passed" : std::to_string(failures) + " check(s) failed") << "\n";
    return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace dlbench::cli
