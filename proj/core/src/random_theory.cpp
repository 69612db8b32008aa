#include "dlbench/random_theory.hpp"

#include <algorithm>
#include <random>

namespace dlbench {

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    // Uniform in [0, bound) by rejection.
    std::size_t below(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % b);
        std::uint64_t x;
        do {
            x = rng_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % b);
    }
    bool chance(unsigned permille) { return below(1000) < permille; }

private:
    std::mt19937_64 rng_;
};

}  // namespace

Theory randomTheory(std::uint64_t seed, const RandomTheoryParams& params) {
    Draw d(seed);
    const std::size_t atoms = 1 + d.below(std::max<std::size_t>(params.maxAtoms, 1));
    auto literal = [&] {
        Literal q{Atom("p" + std::to_string(d.below(atoms))), true};
        q.positive = !d.chance(params.negativePermille);
        return q;
    };

    std::vector<Literal> facts;
    for (std::size_t i = 0, n = d.below(params.maxFacts + 1); i < n; ++i) {
        auto q = literal();
        if (std::find(facts.begin(), facts.end(), q) == facts.end()) facts.push_back(q);
    }

    std::vector<Rule> rules;
    const std::size_t ruleCount = d.below(params.maxRules + 1);
    for (std::size_t i = 0; i < ruleCount; ++i) {
        Rule r{"r" + std::to_string(i + 1), {}, literal(), RuleKind::Defeasible};
        for (std::size_t b = 0, n = d.below(params.maxBody + 1); b < n; ++b) {
            auto q = literal();
            if (std::find(r.body.begin(), r.body.end(), q) == r.body.end()) r.body.push_back(q);
        }
        if (d.chance(params.defeaterPermille)) {
            r.kind = RuleKind::Defeater;
        } else if (d.chance(params.strictPermille)) {
            r.kind = RuleKind::Strict;
        }
        rules.push_back(std::move(r));
    }

    // Pairs follow a random total order on rules, which keeps them acyclic.
    std::vector<std::size_t> rank(ruleCount);
    for (std::size_t i = 0; i < ruleCount; ++i) rank[i] = i;
    for (std::size_t i = ruleCount; i > 1; --i) std::swap(rank[i - 1], rank[d.below(i)]);

    std::vector<std::pair<std::size_t, SuperiorityPair>> placed;
    for (std::size_t i = 0; i < ruleCount; ++i) {
        for (std::size_t j = i + 1; j < ruleCount; ++j) {
            const bool conflict = rules[i].head == complement(rules[j].head);
            if (!d.chance(conflict ? params.priorityPermille : params.priorityPermille / 10)) continue;
            const auto [hi, lo] = rank[i] < rank[j] ? std::pair{i, j} : std::pair{j, i};
            placed.push_back({d.below(ruleCount + 1), {rules[hi].label, rules[lo].label}});
        }
    }
    // Declaration order must agree with the anchors for printing to round-trip.
    std::stable_sort(placed.begin(), placed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SuperiorityPair> sup;
    std::vector<std::size_t> anchors;
    for (auto& [anchor, pair] : placed) {
        anchors.push_back(anchor);
        sup.push_back(std::move(pair));
    }
    return Theory::build(std::move(facts), std::move(rules), std::move(sup), std::move(anchors));
}

}  // namespace dlbench
