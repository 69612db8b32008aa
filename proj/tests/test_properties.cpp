#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dlbench/generator.hpp"
#include "dlbench/parser.hpp"
#include "dlbench/random_theory.hpp"
#include "dlbench/reasoner.hpp"
#include "support/naive_fixpoint.hpp"

using namespace dlbench;

namespace {

constexpr ProofTag kTags[] = {ProofTag::PlusDelta, ProofTag::MinusDelta, ProofTag::PlusPartial,
                              ProofTag::MinusPartial};

std::vector<Theory> familyInstances(std::size_t literalLimit) {
    std::vector<Theory> out;
    for (auto f : kAllFamilies) {
        for (int n = 1; n <= 4; ++n) {
            auto t = generate({f, n, familyTakesK(f) ? std::optional<int>(2) : std::nullopt});
            if (t.literalCount() <= literalLimit) out.push_back(std::move(t));
        }
    }
    return out;
}

const std::set<Literal>& naiveSet(const dlbench::testing::NaiveTags& g, ProofTag tag) {
    switch (tag) {
        case ProofTag::PlusDelta: return g.plusDelta;
        case ProofTag::MinusDelta: return g.minusDelta;
        case ProofTag::PlusPartial: return g.plusPartial;
        case ProofTag::MinusPartial: return g.minusPartial;
    }
    return g.plusDelta;
}

void expectMatchesNaive(const Theory& t, const std::string& what) {
    const auto c = computeConclusions(t);
    const auto g = dlbench::testing::naiveFixpoint(t);
    for (const auto& q : t.literals())
        for (auto tag : kTags)
            ASSERT_EQ(c.has(tag, q), naiveSet(g, tag).count(q) > 0) << what << " " << toString(TaggedLiteral{tag, q});
}

}  // namespace

TEST(Equivalence, EngineMatchesNaiveFixpointOnFamilies) {
    for (auto f : kAllFamilies) {
        for (int n = 1; n <= 6; ++n) {
            FamilySpec spec{f, n, familyTakesK(f) ? std::optional<int>(2) : std::nullopt};
            expectMatchesNaive(generate(spec), label(spec));
            for (auto p : {Polarity::Provable, Polarity::Unprovable}) {
                expectMatchesNaive(makeVariant(generate(spec), spec, p), label(spec) + " variant");
            }
        }
    }
}

TEST(Equivalence, EngineMatchesNaiveFixpointOnRandomTheories) {
    RandomTheoryParams wide;
    wide.maxAtoms = 25;
    wide.maxRules = 40;
    wide.maxFacts = 6;
    for (std::uint64_t seed = 0; seed < 500; ++seed) expectMatchesNaive(randomTheory(seed), "seed " + std::to_string(seed));
    for (std::uint64_t seed = 1000; seed < 1200; ++seed) expectMatchesNaive(randomTheory(seed, wide), "wide seed " + std::to_string(seed));
}

TEST(Equivalence, EngineMatchesOracleOnFamilies) {
    const auto instances = familyInstances(kOracleLiteralLimit);
    ASSERT_EQ(instances.size(), std::size(kAllFamilies) * 4) << "every family up to n=4 fits the oracle";
    for (const auto& t : instances) {
        const auto c = computeConclusions(t);
        for (const auto& q : t.literals())
            for (auto tag : kTags)
                ASSERT_EQ(c.has(tag, q), bruteForceOracle(t, {tag, q})) << printTheory(t) << toString(TaggedLiteral{tag, q});
    }
}

TEST(Equivalence, EngineMatchesOracleOnRandomTheories) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto t = randomTheory(seed + 7000);
        const auto c = computeConclusions(t);
        for (const auto& q : t.literals())
            for (auto tag : kTags)
                ASSERT_EQ(c.has(tag, q), bruteForceOracle(t, {tag, q})) << printTheory(t) << toString(TaggedLiteral{tag, q});
    }
}

TEST(Properties, CoherenceAndConsistency) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto t = randomTheory(seed);
        const auto c = computeConclusions(t);
        for (const auto& q : t.literals()) {
            // A family never derives both signs.
            EXPECT_FALSE(c.has(ProofTag::PlusDelta, q) && c.has(ProofTag::MinusDelta, q));
            EXPECT_FALSE(c.has(ProofTag::PlusPartial, q) && c.has(ProofTag::MinusPartial, q));
            // Definite conclusions carry over; refutation goes the other way.
            if (c.has(ProofTag::PlusDelta, q)) EXPECT_TRUE(c.has(ProofTag::PlusPartial, q));
            if (c.has(ProofTag::MinusPartial, q)) EXPECT_TRUE(c.has(ProofTag::MinusDelta, q));
            // Complementary defeasible conclusions only when both are definite.
            if (c.has(ProofTag::PlusPartial, q) && c.has(ProofTag::PlusPartial, complement(q))) {
                EXPECT_TRUE(c.has(ProofTag::PlusDelta, q) && c.has(ProofTag::PlusDelta, complement(q)));
            }
        }
    }
}

TEST(Properties, ClosureIsIdempotentAndDeterministic) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto t = randomTheory(seed);
        const auto c = computeConclusions(t);
        EXPECT_EQ(computeConclusions(t), c);
        EXPECT_EQ(computeConclusions(t, c), c);
    }
}

TEST(Properties, DeclarationOrderDoesNotMatter) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto t = randomTheory(seed);
        auto facts = t.facts();
        auto rules = t.rules();
        std::mt19937_64 rng(seed);
        std::shuffle(facts.begin(), facts.end(), rng);
        std::shuffle(rules.begin(), rules.end(), rng);
        const auto u = Theory::build(facts, rules, t.superiority());
        const auto a = computeConclusions(t);
        const auto b = computeConclusions(u);
        for (const auto& q : t.literals())
            for (auto tag : kTags) ASSERT_EQ(a.has(tag, q), b.has(tag, q)) << "seed " << seed;
    }
}

TEST(Properties, TracesValidateForEveryConclusion) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto t = randomTheory(seed);
        const auto c = computeConclusions(t);
        for (const auto& q : t.literals()) {
            for (auto tag : kTags) {
                if (!c.has(tag, q)) continue;
                auto check = validateTrace(t, explain(t, TaggedLiteral{tag, q}));
                ASSERT_TRUE(check.valid) << "seed " << seed << " " << toString(TaggedLiteral{tag, q}) << ": "
                                         << check.reason;
            }
        }
    }
}

TEST(RoundTrip, ParsePrintIdentityOnRandomTheories) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto t = randomTheory(seed);
        auto r = parseTheory(printTheory(t));
        ASSERT_TRUE(r.ok()) << printTheory(t);
        EXPECT_EQ(*r.theory, t) << printTheory(t);
    }
}

TEST(RoundTrip, PrintIsAFixpoint) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto text = printTheory(randomTheory(seed));
        EXPECT_EQ(printTheory(*parseTheory(text).theory), text);
    }
}

TEST(RandomTheory, SameSeedSameTheory) {
    EXPECT_EQ(randomTheory(3), randomTheory(3));
    int distinct = 0;
    for (std::uint64_t s = 0; s < 20; ++s) distinct += randomTheory(s) == randomTheory(s + 1) ? 0 : 1;
    EXPECT_GE(distinct, 18);
}

TEST(RandomTheory, RespectsBounds) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto t = randomTheory(seed);
        EXPECT_LE(t.rules().size(), 12u);
        EXPECT_LE(t.literalCount(), 20u);
    }
}
