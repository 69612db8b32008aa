#pragma once

#include <cstddef>
#include <cstdint>

#include "dlbench/theory.hpp"

namespace dlbench {

struct RandomTheoryParams {
    std::size_t maxAtoms = 10;
    std::size_t maxRules = 12;
    std::size_t maxFacts = 3;
    std::size_t maxBody = 3;
    /// Per mille; kept integral so draws do not depend on floating point.
    unsigned negativePermille = 300;
    unsigned defeaterPermille = 150;
    unsigned strictPermille = 200;
    unsigned priorityPermille = 350;
};

/// Seeded random theory over atoms p0..p{maxAtoms-1} with rule labels
/// r1..rN. Superiority pairs always point from an earlier rule to a later
/// one, so the relation is acyclic; most of them pair complementary heads.
/// The same seed yields the same theory on every platform.
Theory randomTheory(std::uint64_t seed, const RandomTheoryParams& params = {});

}  // namespace dlbench
