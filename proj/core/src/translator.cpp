#include "dlbench/translator.hpp"

#include <algorithm>
#include <set>

namespace dlbench {

namespace {

class Phrases {
public:
    explicit Phrases(const RenderConfig& cfg)
        : singular_(cfg.article + " " + cfg.categoryNoun), plural_(cfg.categoryNoun + "s") {}

    // "X is an Arkon" / "X is not an Arkon"
    std::string is(const Literal& q) const {
        return q.atom.name() + (q.positive ? " is " : " is not ") + singular_;
    }
    std::string typically(const Literal& q) const {
        return q.atom.name() + (q.positive ? " is typically " : " is typically not ") + singular_;
    }
    std::string isAlso(const Literal& q) const {
        return q.atom.name() + (q.positive ? " is also " : " is also not ") + singular_;
    }

    std::string areAlso(const std::vector<Literal>& body) const {
        if (body.size() == 1) return isAlso(body.front());
        const bool allPos = std::all_of(body.begin(), body.end(), [](const Literal& l) { return l.positive; });
        const bool allNeg = std::none_of(body.begin(), body.end(), [](const Literal& l) { return l.positive; });
        std::string out;
        if (allPos || allNeg) {
            for (std::size_t i = 0; i < body.size(); ++i) out += (i ? " and " : "") + body[i].atom.name();
            return out + (allPos ? " are also " : " are also not ") + plural_;
        }
        for (std::size_t i = 0; i < body.size(); ++i) out += (i ? " and " : "") + isAlso(body[i]);
        return out;
    }

private:
    std::string singular_;
    std::string plural_;
};

std::string ruleSentence(const Rule& r, const Phrases& ph) {
    std::string s;
    if (r.kind == RuleKind::Defeater) s += "Evidence against: ";
    if (r.body.empty()) {
        s += r.kind == RuleKind::Strict ? ph.is(r.head) : ph.typically(r.head);
        return s;
    }
    s += "If ";
    for (std::size_t i = 0; i < r.body.size(); ++i) s += (i ? " and " : "") + ph.is(r.body[i]);
    s += ", then ";
    if (r.kind != RuleKind::Strict) s += "typically ";
    s += ph.is(r.head);
    return s;
}

std::string unlessClause(const Rule& superior, const Phrases& ph) {
    std::string cond = superior.body.empty() ? "overridden" : ph.areAlso(superior.body);
    return "unless " + cond + " (namely then " + ph.is(superior.head) + ")";
}

}  // namespace

Rendering renderTheory(const Theory& t, const RenderConfig& cfg) {
    Rendering out;
    const Phrases ph(cfg);

    for (const auto& f : t.facts()) out.sentences.push_back(ph.is(f) + ".");

    const auto& rules = t.rules();
    std::vector<std::vector<RuleId>> superiors(rules.size());
    for (const auto& p : t.superiority()) {
        superiors[*t.ruleIndex(p.inferior)].push_back(*t.ruleIndex(p.superior));
    }

    std::set<RuleId> folded;
    for (RuleId s = 0; s < rules.size(); ++s) {
        if (rules[s].body.empty()) folded.insert(superiors[s].begin(), superiors[s].end());
    }

    for (RuleId r = 0; r < rules.size(); ++r) {
        if (folded.contains(r)) {
            if (!superiors[r].empty()) {
                out.warnings.push_back("rule " + rules[r].label +
                                       " is folded into an unless-clause; its own superiors are not rendered");
            }
            continue;
        }
        std::string sentence = ruleSentence(rules[r], ph);
        const auto& sups = superiors[r];
        if (sups.size() > 1) {
            out.warnings.push_back("rule " + rules[r].label + " has " + std::to_string(sups.size()) +
                                   " superior rules; unless-clauses chained");
        }
        for (std::size_t i = 0; i < sups.size(); ++i) {
            sentence += (i == 0 ? ", " : "; and ") + unlessClause(rules[sups[i]], ph);
        }
        out.sentences.push_back(sentence + ".");
    }
    return out;
}

}  // namespace dlbench
