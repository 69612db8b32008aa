#pragma once

#include <string>
#include <vector>

#include "dlbench/theory.hpp"

namespace dlbench {

struct RenderConfig {
    std::string categoryNoun = "Arkon";
    std::string article = "an";
};

struct Rendering {
    std::vector<std::string> sentences;
    std::vector<std::string> warnings;
};

/// Renders a theory as English sentences, one per fact or rule, in
/// declaration order.
///
///   fact                 "X is an Arkon." / "X is not an Arkon."
///   strict rule          "If B1 is an Arkon and B2 is an Arkon, then H is an Arkon."
///   defeasible rule      "If B is an Arkon, then typically H is not an Arkon."
///   empty-body rule      "H is typically an Arkon."
///
/// A rule s with a declared superior t gets the suffix
/// ", unless Bt is also an Arkon (namely then Ht is an Arkon)". If s has an
/// empty body, t is folded into that clause and not rendered on its own;
/// otherwise t is rendered as well.
///
/// Conventions with no counterpart in the benchmark listings: negative facts
/// use "is not"; defeaters are prefixed with "Evidence against: "; an
/// empty-body strict rule reads like a fact; superiors with several body
/// literals render as "B1 and B2 are also Arkons"; a rule with several
/// superiors chains its clauses with "; and unless" and emits a warning.
Rendering renderTheory(const Theory& t, const RenderConfig& cfg = {});

}  // namespace dlbench
