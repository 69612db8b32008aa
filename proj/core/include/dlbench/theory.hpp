#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dlbench {

/// Propositional atom. Names match `[A-Za-z][A-Za-z0-9_]*`; comparison is
/// exact and case-sensitive.
class Atom {
public:
    explicit Atom(std::string name);

    static bool isValidName(std::string_view name) noexcept;

    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;

private:
    std::string name_;
};

struct Literal {
    Atom atom;
    bool positive = true;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

Literal positive(std::string name);
Literal negative(std::string name);

/// ~q: flips the sign, keeps the atom.
Literal complement(const Literal& q);

/// `A0000001` or `-A0000001`.
std::string toString(const Literal& q);

enum class RuleKind { Strict, Defeasible, Defeater };

std::string_view arrowOf(RuleKind kind) noexcept;

struct Rule {
    std::string label;
    std::vector<Literal> body;
    Literal head;
    RuleKind kind = RuleKind::Defeasible;

    friend bool operator==(const Rule&, const Rule&) = default;
};

struct SuperiorityPair {
    std::string superior;
    std::string inferior;

    friend bool operator==(const SuperiorityPair&, const SuperiorityPair&) = default;
};

enum class TheoryErrc {
    DuplicateLabel,
    UnknownLabelInSuperiority,
    CyclicSuperiority,
    SelfSuperiority,
};

class TheoryError : public std::runtime_error {
public:
    TheoryError(TheoryErrc code, std::string message, std::optional<std::size_t> ruleIndex = {},
                std::optional<std::size_t> superiorityIndex = {});

    TheoryErrc code() const noexcept { return code_; }
    /// Offending rule (DuplicateLabel) in declaration order.
    std::optional<std::size_t> ruleIndex() const noexcept { return ruleIndex_; }
    /// Offending superiority pair in declaration order.
    std::optional<std::size_t> superiorityIndex() const noexcept { return superiorityIndex_; }

private:
    TheoryErrc code_;
    std::optional<std::size_t> ruleIndex_;
    std::optional<std::size_t> superiorityIndex_;
};

using LiteralId = std::uint32_t;
using RuleId = std::uint32_t;

enum class RuleClass { All, Strict, StrictOrDefeasible };

/// A defeasible theory (F, R, >).
///
/// Immutable once built. Construction validates labels and the superiority
/// relation, drops duplicate facts and duplicate body literals (recording a
/// warning for each), and compiles the rule indexes R[q], R_s[q], R_sd[q].
///
/// Every literal that occurs in a fact, a body or a head, together with its
/// complement, is part of the literal universe. Ids are assigned per atom in
/// first-occurrence order (facts, then rules body-before-head), positive
/// literal first, so `complementId(id) == id ^ 1`.
class Theory {
public:
    Theory() = default;

    /// `superiorityAnchors[i]` is the number of rules declared before pair i;
    /// it only affects printing. Missing anchors default to "after all rules".
    static Theory build(std::vector<Literal> facts, std::vector<Rule> rules,
                        std::vector<SuperiorityPair> superiority,
                        std::vector<std::size_t> superiorityAnchors = {});

    const std::vector<Literal>& facts() const noexcept { return facts_; }
    const std::vector<Rule>& rules() const noexcept { return rules_; }
    const std::vector<SuperiorityPair>& superiority() const noexcept { return superiority_; }
    const std::vector<std::size_t>& superiorityAnchors() const noexcept { return anchors_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    bool empty() const noexcept { return facts_.empty() && rules_.empty(); }

    /// Rules with head q in the requested class, declaration order.
    std::vector<const Rule*> rulesFor(const Literal& q, RuleClass cls = RuleClass::All) const;

    std::optional<RuleId> ruleIndex(std::string_view label) const;

    // Compiled view used by the reasoners.

    const std::vector<Literal>& literals() const noexcept { return universe_; }
    std::size_t literalCount() const noexcept { return universe_.size(); }
    std::optional<LiteralId> find(const Literal& q) const;
    const Literal& literal(LiteralId id) const { return universe_.at(id); }
    static LiteralId complementId(LiteralId id) noexcept { return id ^ 1U; }

    bool isFact(LiteralId id) const { return isFact_.at(id); }
    std::span<const LiteralId> body(RuleId r) const { return compiledBodies_.at(r); }
    LiteralId head(RuleId r) const { return heads_.at(r); }
    RuleKind kind(RuleId r) const { return rules_.at(r).kind; }
    std::span<const RuleId> rulesFor(LiteralId q, RuleClass cls = RuleClass::All) const;
    /// Rules whose body mentions q.
    std::span<const RuleId> rulesWithBodyLiteral(LiteralId q) const { return bodyOccurrences_.at(q); }

    /// Declared pair t > s only; no transitive closure.
    bool isSuperior(RuleId t, RuleId s) const;

    friend bool operator==(const Theory& a, const Theory& b) {
        return a.facts_ == b.facts_ && a.rules_ == b.rules_ && a.superiority_ == b.superiority_ &&
               a.anchors_ == b.anchors_;
    }

private:
    std::vector<Literal> facts_;
    std::vector<Rule> rules_;
    std::vector<SuperiorityPair> superiority_;
    std::vector<std::size_t> anchors_;
    std::vector<std::string> warnings_;

    std::vector<Literal> universe_;
    std::unordered_map<std::string, std::uint32_t> atomIds_;
    std::vector<bool> isFact_;
    std::vector<std::vector<LiteralId>> compiledBodies_;
    std::vector<LiteralId> heads_;
    std::vector<std::vector<RuleId>> byHead_;
    std::vector<std::vector<RuleId>> strictByHead_;
    std::vector<std::vector<RuleId>> sdByHead_;
    std::vector<std::vector<RuleId>> bodyOccurrences_;
    std::unordered_map<std::string, RuleId> labels_;
    std::vector<std::vector<RuleId>> inferiorsOf_;

    LiteralId intern(const Literal& q);
};

/// Free-function spelling of Theory::rulesFor.
inline std::vector<const Rule*> rulesFor(const Theory& t, const Literal& q, RuleClass cls = RuleClass::All) {
    return t.rulesFor(q, cls);
}

}  // namespace dlbench

template <>
struct std::hash<dlbench::Literal> {
    std::size_t operator()(const dlbench::Literal& q) const noexcept {
        return std::hash<std::string>{}(q.atom.name()) * 2 + (q.positive ? 1 : 0);
    }
};
