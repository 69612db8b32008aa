#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dlbench/theory.hpp"

namespace dlbench {

enum class ProofTag { PlusDelta, MinusDelta, PlusPartial, MinusPartial };

/// `+D`, `-D`, `+d`, `-d`.
std::string_view toString(ProofTag tag) noexcept;

enum class TagState { ProvedPositive, ProvedNegative, Undetermined };

struct TaggedLiteral {
    ProofTag tag;
    Literal literal;

    friend bool operator==(const TaggedLiteral&, const TaggedLiteral&) = default;
};

std::string toString(const TaggedLiteral& t);

struct LiteralConclusion {
    Literal literal;
    TagState delta = TagState::Undetermined;
    TagState partial = TagState::Undetermined;

    friend bool operator==(const LiteralConclusion&, const LiteralConclusion&) = default;
};

/// Tag states for every literal of a theory's universe, in universe order.
///
/// A family (definite or defeasible) is Undetermined for a literal when the
/// closure derives neither its + nor its - tag, which is what happens to
/// literals that depend on an unfounded cycle.
class ConclusionSet {
public:
    ConclusionSet() = default;
    explicit ConclusionSet(std::vector<LiteralConclusion> entries) : entries_(std::move(entries)) {}

    const std::vector<LiteralConclusion>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Literals outside the universe have no rules and are not facts, so
    /// both families are ProvedNegative for them.
    TagState delta(const Literal& q) const;
    TagState partial(const Literal& q) const;
    bool has(ProofTag tag, const Literal& q) const;

    friend bool operator==(const ConclusionSet&, const ConclusionSet&) = default;

private:
    std::vector<LiteralConclusion> entries_;
    const LiteralConclusion* lookup(const Literal& q) const;
};

/// Least fixpoint of the four inference conditions. Total on validated
/// theories; evaluation order is deterministic.
ConclusionSet computeConclusions(const Theory& t);

/// Closure starting from an already-derived set of tags (which must be
/// derivable in t). computeConclusions(t, computeConclusions(t)) is the
/// identity.
ConclusionSet computeConclusions(const Theory& t, const ConclusionSet& seed);

enum class Verdict { ProvablyTrue, ProvablyFalse, Undetermined };

std::string_view toString(Verdict v) noexcept;
std::optional<Verdict> verdictFromString(std::string_view s) noexcept;

/// ProvablyTrue iff +d q, ProvablyFalse iff +d ~q.
Verdict query(const Theory& t, const Literal& q);
Verdict query(const ConclusionSet& c, const Literal& q);

struct DerivationStep {
    TaggedLiteral conclusion;
    std::vector<std::string> rules;    // labels the step relied on
    std::vector<std::size_t> premises; // indices of earlier steps
};

using DerivationTrace = std::vector<DerivationStep>;

class NoDerivation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Proof of the strongest defeasible-family conclusion about q: +D if it
/// holds, otherwise +d, otherwise -d. Throws NoDerivation when q is
/// Undetermined in the defeasible family.
DerivationTrace explain(const Theory& t, const Literal& q);

/// Proof of one specific tagged literal; throws NoDerivation if it is not
/// derivable.
DerivationTrace explain(const Theory& t, const TaggedLiteral& target);

struct TraceCheck {
    bool valid = true;
    std::size_t failedStep = 0;
    std::string reason;
};

/// Replays a trace step by step: each conclusion must satisfy its inference
/// condition using only conclusions that appear earlier in the trace, and
/// each premise index must point backwards.
TraceCheck validateTrace(const Theory& t, const DerivationTrace& trace);

std::string formatTrace(const DerivationTrace& trace);

class TheoryTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleLiteralLimit = 64;

/// Top-down proof search over the inference conditions with per-branch loop
/// detection. Exponential in the worst case; meant as a test oracle for
/// computeConclusions. Throws TheoryTooLarge when the literal universe
/// exceeds kOracleLiteralLimit.
bool bruteForceOracle(const Theory& t, const TaggedLiteral& tagged);

}  // namespace dlbench
