#include "dlbench/theory.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <utility>

namespace dlbench {

namespace {

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

}  // namespace

Atom::Atom(std::string name) : name_(std::move(name)) {
    if (!isValidName(name_)) throw std::invalid_argument("invalid atom name '" + name_ + "'");
}

bool Atom::isValidName(std::string_view name) noexcept {
    if (name.empty() || !isIdentStart(name.front())) return false;
    return std::all_of(name.begin(), name.end(), isIdentChar);
}

Literal positive(std::string name) { return Literal{Atom{std::move(name)}, true}; }
Literal negative(std::string name) { return Literal{Atom{std::move(name)}, false}; }

Literal complement(const Literal& q) { return Literal{q.atom, !q.positive}; }

std::string toString(const Literal& q) { return q.positive ? q.atom.name() : "-" + q.atom.name(); }

std::string_view arrowOf(RuleKind kind) noexcept {
    switch (kind) {
        case RuleKind::Strict: return "->";
        case RuleKind::Defeasible: return "=>";
        case RuleKind::Defeater: return "~>";
    }
    return "=>";
}

TheoryError::TheoryError(TheoryErrc code, std::string message, std::optional<std::size_t> ruleIndex,
                         std::optional<std::size_t> superiorityIndex)
    : std::runtime_error(std::move(message)),
      code_(code),
      ruleIndex_(ruleIndex),
      superiorityIndex_(superiorityIndex) {}

LiteralId Theory::intern(const Literal& q) {
    auto [it, inserted] = atomIds_.try_emplace(q.atom.name(), static_cast<std::uint32_t>(atomIds_.size()));
    if (inserted) {
        universe_.push_back(Literal{q.atom, true});
        universe_.push_back(Literal{q.atom, false});
    }
    return it->second * 2 + (q.positive ? 0U : 1U);
}

Theory Theory::build(std::vector<Literal> facts, std::vector<Rule> rules, std::vector<SuperiorityPair> superiority,
                     std::vector<std::size_t> superiorityAnchors) {
    Theory t;

    std::unordered_set<Literal> seenFacts;
    for (auto& f : facts) {
        if (!seenFacts.insert(f).second) {
            t.warnings_.push_back("duplicate fact " + toString(f) + " dropped");
            continue;
        }
        t.facts_.push_back(std::move(f));
    }

    for (std::size_t i = 0; i < rules.size(); ++i) {
        auto& r = rules[i];
        if (!t.labels_.try_emplace(r.label, static_cast<RuleId>(i)).second) {
            throw TheoryError(TheoryErrc::DuplicateLabel, "duplicate rule label '" + r.label + "'", i);
        }
        std::vector<Literal> body;
        for (auto& b : r.body) {
            if (std::find(body.begin(), body.end(), b) != body.end()) {
                t.warnings_.push_back("rule " + r.label + ": duplicate body literal " + toString(b) + " dropped");
                continue;
            }
            body.push_back(std::move(b));
        }
        r.body = std::move(body);
        t.rules_.push_back(std::move(r));
    }

    const auto ruleCount = t.rules_.size();
    t.inferiorsOf_.assign(ruleCount, {});
    for (std::size_t i = 0; i < superiority.size(); ++i) {
        const auto& p = superiority[i];
        auto sup = t.labels_.find(p.superior);
        auto inf = t.labels_.find(p.inferior);
        if (sup == t.labels_.end() || inf == t.labels_.end()) {
            const auto& missing = sup == t.labels_.end() ? p.superior : p.inferior;
            throw TheoryError(TheoryErrc::UnknownLabelInSuperiority,
                              "superiority " + p.superior + " > " + p.inferior + " refers to unknown rule '" +
                                  missing + "'",
                              std::nullopt, i);
        }
        if (sup->second == inf->second) {
            throw TheoryError(TheoryErrc::SelfSuperiority, "rule '" + p.superior + "' declared superior to itself",
                              std::nullopt, i);
        }
        auto& edges = t.inferiorsOf_[sup->second];
        if (std::find(edges.begin(), edges.end(), inf->second) != edges.end()) {
            t.warnings_.push_back("duplicate superiority " + p.superior + " > " + p.inferior + " dropped");
            continue;
        }

        // Adding sup -> inf closes a cycle iff sup is already reachable from inf.
        std::vector<bool> seen(ruleCount, false);
        std::vector<RuleId> stack{inf->second};
        seen[inf->second] = true;
        while (!stack.empty()) {
            RuleId cur = stack.back();
            stack.pop_back();
            if (cur == sup->second) {
                throw TheoryError(TheoryErrc::CyclicSuperiority,
                                  "superiority " + p.superior + " > " + p.inferior + " closes a cycle", std::nullopt,
                                  i);
            }
            for (RuleId next : t.inferiorsOf_[cur]) {
                if (!seen[next]) {
                    seen[next] = true;
                    stack.push_back(next);
                }
            }
        }
        edges.push_back(inf->second);
        t.superiority_.push_back(p);
        t.anchors_.push_back(i < superiorityAnchors.size() ? std::min(superiorityAnchors[i], ruleCount) : ruleCount);
    }

    for (const auto& f : t.facts_) t.intern(f);
    for (const auto& r : t.rules_) {
        for (const auto& b : r.body) t.intern(b);
        t.intern(r.head);
    }

    const auto n = t.universe_.size();
    t.isFact_.assign(n, false);
    t.byHead_.assign(n, {});
    t.strictByHead_.assign(n, {});
    t.sdByHead_.assign(n, {});
    t.bodyOccurrences_.assign(n, {});
    for (const auto& f : t.facts_) t.isFact_[*t.find(f)] = true;
    for (RuleId r = 0; r < ruleCount; ++r) {
        const auto& rule = t.rules_[r];
        std::vector<LiteralId> body;
        body.reserve(rule.body.size());
        for (const auto& b : rule.body) {
            auto id = *t.find(b);
            body.push_back(id);
            t.bodyOccurrences_[id].push_back(r);
        }
        t.compiledBodies_.push_back(std::move(body));
        auto h = *t.find(rule.head);
        t.heads_.push_back(h);
        t.byHead_[h].push_back(r);
        if (rule.kind != RuleKind::Defeater) t.sdByHead_[h].push_back(r);
        if (rule.kind == RuleKind::Strict) t.strictByHead_[h].push_back(r);
    }
    return t;
}

std::optional<LiteralId> Theory::find(const Literal& q) const {
    auto it = atomIds_.find(q.atom.name());
    if (it == atomIds_.end()) return std::nullopt;
    return it->second * 2 + (q.positive ? 0U : 1U);
}

std::optional<RuleId> Theory::ruleIndex(std::string_view label) const {
    auto it = labels_.find(std::string(label));
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

std::span<const RuleId> Theory::rulesFor(LiteralId q, RuleClass cls) const {
    switch (cls) {
        case RuleClass::Strict: return strictByHead_.at(q);
        case RuleClass::StrictOrDefeasible: return sdByHead_.at(q);
        case RuleClass::All: break;
    }
    return byHead_.at(q);
}

std::vector<const Rule*> Theory::rulesFor(const Literal& q, RuleClass cls) const {
    std::vector<const Rule*> out;
    auto id = find(q);
    if (!id) return out;
    for (RuleId r : rulesFor(*id, cls)) out.push_back(&rules_[r]);
    return out;
}

bool Theory::isSuperior(RuleId t, RuleId s) const {
    const auto& inf = inferiorsOf_.at(t);
    return std::find(inf.begin(), inf.end(), s) != inf.end();
}

}  // namespace dlbench
