#include "dlbench/reasoner.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace dlbench {

std::string_view toString(ProofTag tag) noexcept {
    switch (tag) {
        case ProofTag::PlusDelta: return "+D";
        case ProofTag::MinusDelta: return "-D";
        case ProofTag::PlusPartial: return "+d";
        case ProofTag::MinusPartial: return "-d";
    }
    return "?";
}

std::string toString(const TaggedLiteral& t) { return std::string(toString(t.tag)) + " " + toString(t.literal); }

std::string_view toString(Verdict v) noexcept {
    switch (v) {
        case Verdict::ProvablyTrue: return "ProvablyTrue";
        case Verdict::ProvablyFalse: return "ProvablyFalse";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

std::optional<Verdict> verdictFromString(std::string_view s) noexcept {
    for (auto v : {Verdict::ProvablyTrue, Verdict::ProvablyFalse, Verdict::Undetermined}) {
        if (toString(v) == s) return v;
    }
    return std::nullopt;
}

const LiteralConclusion* ConclusionSet::lookup(const Literal& q) const {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.literal == q; });
    return it == entries_.end() ? nullptr : &*it;
}

TagState ConclusionSet::delta(const Literal& q) const {
    const auto* e = lookup(q);
    return e ? e->delta : TagState::ProvedNegative;
}

TagState ConclusionSet::partial(const Literal& q) const {
    const auto* e = lookup(q);
    return e ? e->partial : TagState::ProvedNegative;
}

bool ConclusionSet::has(ProofTag tag, const Literal& q) const {
    switch (tag) {
        case ProofTag::PlusDelta: return delta(q) == TagState::ProvedPositive;
        case ProofTag::MinusDelta: return delta(q) == TagState::ProvedNegative;
        case ProofTag::PlusPartial: return partial(q) == TagState::ProvedPositive;
        case ProofTag::MinusPartial: return partial(q) == TagState::ProvedNegative;
    }
    return false;
}

namespace {

constexpr std::size_t kNoStep = std::numeric_limits<std::size_t>::max();
constexpr std::array kTagOrder{ProofTag::PlusDelta, ProofTag::MinusDelta, ProofTag::PlusPartial,
                               ProofTag::MinusPartial};

std::size_t idx(ProofTag tag) { return static_cast<std::size_t>(tag); }

/// Bottom-up closure with an agenda of literals whose conditions may have
/// become satisfiable.
class Engine {
public:
    Engine(const Theory& t, bool tracing) : t_(t), tracing_(tracing) {
        const auto n = t.literalCount();
        has_.assign(n, {false, false, false, false});
        step_.assign(n, {kNoStep, kNoStep, kNoStep, kNoStep});
    }

    void seed(const ConclusionSet& c) {
        for (const auto& e : c.entries()) {
            auto id = t_.find(e.literal);
            if (!id) continue;
            if (e.delta == TagState::ProvedPositive) has_[*id][idx(ProofTag::PlusDelta)] = true;
            if (e.delta == TagState::ProvedNegative) has_[*id][idx(ProofTag::MinusDelta)] = true;
            if (e.partial == TagState::ProvedPositive) has_[*id][idx(ProofTag::PlusPartial)] = true;
            if (e.partial == TagState::ProvedNegative) has_[*id][idx(ProofTag::MinusPartial)] = true;
        }
    }

    void run() {
        const auto n = static_cast<LiteralId>(t_.literalCount());
        std::deque<LiteralId> agenda;
        std::vector<bool> queued(n, true);
        for (LiteralId q = 0; q < n; ++q) agenda.push_back(q);

        auto schedule = [&](LiteralId q) {
            if (!queued[q]) {
                queued[q] = true;
                agenda.push_back(q);
            }
        };

        while (!agenda.empty()) {
            LiteralId q = agenda.front();
            agenda.pop_front();
            queued[q] = false;
            if (!evaluate(q)) continue;
            schedule(q);
            schedule(Theory::complementId(q));
            for (RuleId r : t_.rulesWithBodyLiteral(q)) {
                schedule(t_.head(r));
                schedule(Theory::complementId(t_.head(r)));
            }
        }
    }

    ConclusionSet conclusions() const {
        std::vector<LiteralConclusion> out;
        out.reserve(t_.literalCount());
        for (LiteralId q = 0; q < t_.literalCount(); ++q) {
            auto state = [&](ProofTag plus, ProofTag minus) {
                if (has_[q][idx(plus)]) return TagState::ProvedPositive;
                if (has_[q][idx(minus)]) return TagState::ProvedNegative;
                return TagState::Undetermined;
            };
            out.push_back({t_.literal(q), state(ProofTag::PlusDelta, ProofTag::MinusDelta),
                           state(ProofTag::PlusPartial, ProofTag::MinusPartial)});
        }
        return ConclusionSet{std::move(out)};
    }

    std::size_t stepOf(ProofTag tag, LiteralId q) const { return step_[q][idx(tag)]; }
    const DerivationTrace& steps() const { return steps_; }

private:
    struct Justification {
        std::vector<std::string> rules;
        std::vector<std::size_t> premises;
    };

    const Theory& t_;
    bool tracing_;
    std::vector<std::array<bool, 4>> has_;
    std::vector<std::array<std::size_t, 4>> step_;
    DerivationTrace steps_;

    bool holds(ProofTag tag, LiteralId q) const { return has_[q][idx(tag)]; }

    void use(Justification& j, ProofTag tag, LiteralId q) const {
        if (tracing_) j.premises.push_back(step_[q][idx(tag)]);
    }
    void cite(Justification& j, RuleId r) const {
        if (tracing_) j.rules.push_back(t_.rules()[r].label);
    }

    bool allBody(RuleId r, ProofTag tag) const {
        auto body = t_.body(r);
        return std::all_of(body.begin(), body.end(), [&](LiteralId a) { return holds(tag, a); });
    }
    void useBody(Justification& j, RuleId r, ProofTag tag) const {
        for (LiteralId a : t_.body(r)) use(j, tag, a);
    }
    std::optional<LiteralId> someBody(RuleId r, ProofTag tag) const {
        for (LiteralId a : t_.body(r)) {
            if (holds(tag, a)) return a;
        }
        return std::nullopt;
    }

    bool evaluate(LiteralId q) {
        bool changed = false;
        for (ProofTag tag : kTagOrder) {
            if (holds(tag, q)) continue;
            Justification j;
            if (!check(tag, q, j)) continue;
            has_[q][idx(tag)] = true;
            changed = true;
            if (tracing_) {
                step_[q][idx(tag)] = steps_.size();
                steps_.push_back({{tag, t_.literal(q)}, std::move(j.rules), std::move(j.premises)});
            }
        }
        return changed;
    }

    bool check(ProofTag tag, LiteralId q, Justification& j) const {
        const LiteralId nq = Theory::complementId(q);
        switch (tag) {
            case ProofTag::PlusDelta: {
                if (t_.isFact(q)) return true;
                for (RuleId r : t_.rulesFor(q, RuleClass::Strict)) {
                    if (allBody(r, ProofTag::PlusDelta)) {
                        cite(j, r);
                        useBody(j, r, ProofTag::PlusDelta);
                        return true;
                    }
                }
                return false;
            }
            case ProofTag::MinusDelta: {
                if (t_.isFact(q)) return false;
                for (RuleId r : t_.rulesFor(q, RuleClass::Strict)) {
                    auto a = someBody(r, ProofTag::MinusDelta);
                    if (!a) return false;
                    cite(j, r);
                    use(j, ProofTag::MinusDelta, *a);
                }
                return true;
            }
            case ProofTag::PlusPartial: {
                if (holds(ProofTag::PlusDelta, q)) {
                    use(j, ProofTag::PlusDelta, q);
                    return true;
                }
                if (!holds(ProofTag::MinusDelta, nq)) return false;
                auto support = t_.rulesFor(q, RuleClass::StrictOrDefeasible);
                auto applicable = std::find_if(support.begin(), support.end(),
                                               [&](RuleId r) { return allBody(r, ProofTag::PlusPartial); });
                if (applicable == support.end()) return false;
                cite(j, *applicable);
                useBody(j, *applicable, ProofTag::PlusPartial);
                use(j, ProofTag::MinusDelta, nq);
                for (RuleId s : t_.rulesFor(nq)) {
                    if (auto a = someBody(s, ProofTag::MinusPartial)) {
                        cite(j, s);
                        use(j, ProofTag::MinusPartial, *a);
                        continue;
                    }
                    auto beaten = std::find_if(support.begin(), support.end(), [&](RuleId r) {
                        return t_.isSuperior(r, s) && allBody(r, ProofTag::PlusPartial);
                    });
                    if (beaten == support.end()) return false;
                    cite(j, s);
                    cite(j, *beaten);
                    useBody(j, *beaten, ProofTag::PlusPartial);
                }
                return true;
            }
            case ProofTag::MinusPartial: {
                if (!holds(ProofTag::MinusDelta, q)) return false;
                use(j, ProofTag::MinusDelta, q);
                auto support = t_.rulesFor(q, RuleClass::StrictOrDefeasible);

                // (2.1) every supporting rule is blocked
                Justification blocked;
                bool allBlocked = true;
                for (RuleId r : support) {
                    auto a = someBody(r, ProofTag::MinusPartial);
                    if (!a) {
                        allBlocked = false;
                        break;
                    }
                    cite(blocked, r);
                    use(blocked, ProofTag::MinusPartial, *a);
                }
                if (allBlocked) {
                    j.rules.insert(j.rules.end(), blocked.rules.begin(), blocked.rules.end());
                    j.premises.insert(j.premises.end(), blocked.premises.begin(), blocked.premises.end());
                    return true;
                }

                // (2.2) the complement is definitely provable
                if (holds(ProofTag::PlusDelta, nq)) {
                    use(j, ProofTag::PlusDelta, nq);
                    return true;
                }

                // (2.3) an applicable attacker that no applicable supporter beats
                for (RuleId s : t_.rulesFor(nq)) {
                    if (!allBody(s, ProofTag::PlusPartial)) continue;
                    Justification undefeated;
                    bool ok = true;
                    for (RuleId r : support) {
                        if (!t_.isSuperior(r, s)) continue;
                        auto a = someBody(r, ProofTag::MinusPartial);
                        if (!a) {
                            ok = false;
                            break;
                        }
                        cite(undefeated, r);
                        use(undefeated, ProofTag::MinusPartial, *a);
                    }
                    if (!ok) continue;
                    cite(j, s);
                    useBody(j, s, ProofTag::PlusPartial);
                    j.rules.insert(j.rules.end(), undefeated.rules.begin(), undefeated.rules.end());
                    j.premises.insert(j.premises.end(), undefeated.premises.begin(), undefeated.premises.end());
                    return true;
                }
                return false;
            }
        }
        return false;
    }
};

}  // namespace

ConclusionSet computeConclusions(const Theory& t) {
    Engine engine(t, false);
    engine.run();
    return engine.conclusions();
}

ConclusionSet computeConclusions(const Theory& t, const ConclusionSet& seed) {
    Engine engine(t, false);
    engine.seed(seed);
    engine.run();
    return engine.conclusions();
}

Verdict query(const ConclusionSet& c, const Literal& q) {
    if (c.has(ProofTag::PlusPartial, q)) return Verdict::ProvablyTrue;
    if (c.has(ProofTag::PlusPartial, complement(q))) return Verdict::ProvablyFalse;
    return Verdict::Undetermined;
}

Verdict query(const Theory& t, const Literal& q) { return query(computeConclusions(t), q); }

DerivationTrace explain(const Theory& t, const TaggedLiteral& target) {
    auto id = t.find(target.literal);
    if (!id) {
        // Unknown literals are vacuously -D and -d; nothing else is derivable.
        if (target.tag == ProofTag::MinusDelta) return {{target, {}, {}}};
        if (target.tag == ProofTag::MinusPartial) {
            return {{{ProofTag::MinusDelta, target.literal}, {}, {}}, {target, {}, {0}}};
        }
        throw NoDerivation("no derivation of " + toString(target));
    }

    Engine engine(t, true);
    engine.run();
    const auto goal = engine.stepOf(target.tag, *id);
    if (goal == kNoStep) throw NoDerivation("no derivation of " + toString(target));

    const auto& all = engine.steps();
    std::vector<bool> needed(all.size(), false);
    std::vector<std::size_t> stack{goal};
    needed[goal] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto p : all[s].premises) {
            if (!needed[p]) {
                needed[p] = true;
                stack.push_back(p);
            }
        }
    }

    std::vector<std::size_t> renumber(all.size(), kNoStep);
    DerivationTrace out;
    for (std::size_t s = 0; s <= goal; ++s) {
        if (!needed[s]) continue;
        renumber[s] = out.size();
        DerivationStep step = all[s];
        for (auto& p : step.premises) p = renumber[p];
        std::sort(step.premises.begin(), step.premises.end());
        step.premises.erase(std::unique(step.premises.begin(), step.premises.end()), step.premises.end());
        out.push_back(std::move(step));
    }
    return out;
}

DerivationTrace explain(const Theory& t, const Literal& q) {
    const auto c = computeConclusions(t);
    if (c.has(ProofTag::PlusDelta, q)) return explain(t, TaggedLiteral{ProofTag::PlusDelta, q});
    if (c.has(ProofTag::PlusPartial, q)) return explain(t, TaggedLiteral{ProofTag::PlusPartial, q});
    if (c.has(ProofTag::MinusPartial, q)) return explain(t, TaggedLiteral{ProofTag::MinusPartial, q});
    throw NoDerivation(toString(q) + " is undetermined in the defeasible family");
}

TraceCheck validateTrace(const Theory& t, const DerivationTrace& trace) {
    std::set<std::pair<ProofTag, Literal>> proved;
    auto in = [&](ProofTag tag, const Literal& q) { return proved.contains({tag, q}); };
    auto allBody = [&](const Rule& r, ProofTag tag) {
        return std::all_of(r.body.begin(), r.body.end(), [&](const Literal& a) { return in(tag, a); });
    };
    auto someBody = [&](const Rule& r, ProofTag tag) {
        return std::any_of(r.body.begin(), r.body.end(), [&](const Literal& a) { return in(tag, a); });
    };
    auto superior = [&](const Rule& a, const Rule& b) {
        return std::find(t.superiority().begin(), t.superiority().end(), SuperiorityPair{a.label, b.label}) !=
               t.superiority().end();
    };
    auto isFact = [&](const Literal& q) { return std::find(t.facts().begin(), t.facts().end(), q) != t.facts().end(); };

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& step = trace[i];
        for (auto p : step.premises) {
            if (p >= i) return {false, i, "premise " + std::to_string(p) + " does not precede the step"};
        }
        const Literal& q = step.conclusion.literal;
        const Literal nq = complement(q);
        const auto strict = t.rulesFor(q, RuleClass::Strict);
        const auto support = t.rulesFor(q, RuleClass::StrictOrDefeasible);
        const auto attackers = t.rulesFor(nq, RuleClass::All);

        bool ok = false;
        switch (step.conclusion.tag) {
            case ProofTag::PlusDelta:
                ok = isFact(q) ||
                     std::any_of(strict.begin(), strict.end(), [&](auto* r) { return allBody(*r, ProofTag::PlusDelta); });
                break;
            case ProofTag::MinusDelta:
                ok = !isFact(q) && std::all_of(strict.begin(), strict.end(),
                                               [&](auto* r) { return someBody(*r, ProofTag::MinusDelta); });
                break;
            case ProofTag::PlusPartial:
                ok = in(ProofTag::PlusDelta, q) ||
                     (std::any_of(support.begin(), support.end(),
                                  [&](auto* r) { return allBody(*r, ProofTag::PlusPartial); }) &&
                      in(ProofTag::MinusDelta, nq) && std::all_of(attackers.begin(), attackers.end(), [&](auto* s) {
                          return someBody(*s, ProofTag::MinusPartial) ||
                                 std::any_of(support.begin(), support.end(), [&](auto* r) {
                                     return allBody(*r, ProofTag::PlusPartial) && superior(*r, *s);
                                 });
                      }));
                break;
            case ProofTag::MinusPartial:
                ok = in(ProofTag::MinusDelta, q) &&
                     (std::all_of(support.begin(), support.end(),
                                  [&](auto* r) { return someBody(*r, ProofTag::MinusPartial); }) ||
                      in(ProofTag::PlusDelta, nq) || std::any_of(attackers.begin(), attackers.end(), [&](auto* s) {
                          return allBody(*s, ProofTag::PlusPartial) &&
                                 std::all_of(support.begin(), support.end(), [&](auto* r) {
                                     return someBody(*r, ProofTag::MinusPartial) || !superior(*r, *s);
                                 });
                      }));
                break;
        }
        if (!ok) return {false, i, "condition for " + toString(step.conclusion) + " not met by earlier steps"};
        proved.insert({step.conclusion.tag, q});
    }
    return {};
}

std::string formatTrace(const DerivationTrace& trace) {
    std::ostringstream os;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace[i];
        os << i + 1 << ". " << toString(s.conclusion);
        if (!s.rules.empty()) {
            os << "  by";
            for (std::size_t k = 0; k < s.rules.size(); ++k) os << (k ? ", " : " ") << s.rules[k];
        }
        if (!s.premises.empty()) {
            os << "  from";
            for (std::size_t k = 0; k < s.premises.size(); ++k) os << (k ? ", " : " ") << s.premises[k] + 1;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace dlbench
