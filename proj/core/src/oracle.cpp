#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "dlbench/reasoner.hpp"

namespace dlbench {

namespace {

// Goal-directed search for a finite derivation. A goal revisited on the
// current branch fails; the failure is only memoised when it did not depend
// on such a cut above the goal, which keeps memoised answers context free.
class ProofSearch {
public:
    explicit ProofSearch(const Theory& t) : t_(t) {
        for (const auto& p : t.superiority()) superior_.insert({p.superior, p.inferior});
        facts_.insert(t.facts().begin(), t.facts().end());
    }

    bool prove(ProofTag tag, const Literal& q) { return solve({tag, q}, 0).ok; }

private:
    using Goal = std::pair<ProofTag, Literal>;
    static constexpr int kNoCut = std::numeric_limits<int>::max();

    struct Outcome {
        bool ok;
        int cut;  // shallowest on-path depth whose revisit was cut below here
    };

    const Theory& t_;
    std::set<std::pair<std::string, std::string>> superior_;
    std::set<Literal> facts_;
    std::map<Goal, bool> memo_;
    std::map<Goal, int> onPath_;

    Outcome solve(const Goal& g, int depth) {
        if (auto m = memo_.find(g); m != memo_.end()) return {m->second, kNoCut};
        if (auto p = onPath_.find(g); p != onPath_.end()) return {false, p->second};

        onPath_.emplace(g, depth);
        int cut = kNoCut;
        auto sub = [&](ProofTag tag, const Literal& q) {
            auto o = solve({tag, q}, depth + 1);
            cut = std::min(cut, o.cut);
            return o.ok;
        };
        bool ok = conditions(g.first, g.second, sub);
        onPath_.erase(g);

        if (ok || cut >= depth) memo_[g] = ok;
        return {ok, cut >= depth ? kNoCut : cut};
    }

    bool beats(const Rule& t, const Rule& s) const { return superior_.contains({t.label, s.label}); }

    template <typename Sub>
    bool conditions(ProofTag tag, const Literal& q, Sub& sub) {
        const Literal nq = complement(q);
        auto all = [&](const Rule& r, ProofTag tg) {
            for (const auto& a : r.body) {
                if (!sub(tg, a)) return false;
            }
            return true;
        };
        auto some = [&](const Rule& r, ProofTag tg) {
            for (const auto& a : r.body) {
                if (sub(tg, a)) return true;
            }
            return false;
        };

        switch (tag) {
            case ProofTag::PlusDelta: {
                if (facts_.contains(q)) return true;
                for (const Rule* r : t_.rulesFor(q, RuleClass::Strict)) {
                    if (all(*r, ProofTag::PlusDelta)) return true;
                }
                return false;
            }
            case ProofTag::MinusDelta: {
                if (facts_.contains(q)) return false;
                for (const Rule* r : t_.rulesFor(q, RuleClass::Strict)) {
                    if (!some(*r, ProofTag::MinusDelta)) return false;
                }
                return true;
            }
            case ProofTag::PlusPartial: {
                if (sub(ProofTag::PlusDelta, q)) return true;
                const auto support = t_.rulesFor(q, RuleClass::StrictOrDefeasible);
                bool applicable = false;
                for (const Rule* r : support) {
                    if (all(*r, ProofTag::PlusPartial)) {
                        applicable = true;
                        break;
                    }
                }
                if (!applicable || !sub(ProofTag::MinusDelta, nq)) return false;
                for (const Rule* s : t_.rulesFor(nq, RuleClass::All)) {
                    if (some(*s, ProofTag::MinusPartial)) continue;
                    bool defeated = false;
                    for (const Rule* r : support) {
                        if (beats(*r, *s) && all(*r, ProofTag::PlusPartial)) {
                            defeated = true;
                            break;
                        }
                    }
                    if (!defeated) return false;
                }
                return true;
            }
            case ProofTag::MinusPartial: {
                if (!sub(ProofTag::MinusDelta, q)) return false;
                const auto support = t_.rulesFor(q, RuleClass::StrictOrDefeasible);
                bool allBlocked = true;
                for (const Rule* r : support) {
                    if (!some(*r, ProofTag::MinusPartial)) {
                        allBlocked = false;
                        break;
                    }
                }
                if (allBlocked) return true;
                if (sub(ProofTag::PlusDelta, nq)) return true;
                for (const Rule* s : t_.rulesFor(nq, RuleClass::All)) {
                    if (!all(*s, ProofTag::PlusPartial)) continue;
                    bool undefeated = true;
                    for (const Rule* r : support) {
                        if (beats(*r, *s) && !some(*r, ProofTag::MinusPartial)) {
                            undefeated = false;
                            break;
                        }
                    }
                    if (undefeated) return true;
                }
                return false;
            }
        }
        return false;
    }
};

}  // namespace

bool bruteForceOracle(const Theory& t, const TaggedLiteral& tagged) {
    if (t.literalCount() > kOracleLiteralLimit) {
        throw TheoryTooLarge("oracle limited to " + std::to_string(kOracleLiteralLimit) + " literals, theory has " +
                             std::to_string(t.literalCount()));
    }
    ProofSearch search(t);
    return search.prove(tagged.tag, tagged.literal);
}

}  // namespace dlbench
