#pragma once

#include <string>
#include <vector>

#include "dlbench/generator.hpp"

namespace dlbench::harness {

inline constexpr const char* kSystemInstruction =
    "You are an expert on defeasible reasoning. Your task is to make logical conclusions based on provided knowledge "
    "(delimited with XML tags).";

/// User message template. `{theory}` receives the knowledge sentences joined
/// by newlines; `{atom}`, `{article}` and `{noun}` form the question.
inline constexpr const char* kUserTemplate =
    "Based on the following knowledge alone:\n"
    "\n"
    "<knowledge>\n"
    "``{theory}''\n"
    "</knowledge>\n"
    "\n"
    "Is {atom} {article} {noun}?\n"
    "\n"
    "Let's think step by step.";

inline constexpr const char* kForcedChoiceFollowUp = "Answer with exactly one of: YES / NO / CANNOT CONCLUDE";

struct PromptTemplate {
    std::string systemInstruction = kSystemInstruction;
    std::string userTemplate = kUserTemplate;
};

struct PromptBundle {
    std::string systemInstruction;
    std::string userMessage;
    std::string caseId;
    std::vector<std::string> warnings;
};

PromptBundle buildPrompt(const BenchmarkCase& c, const RenderConfig& render = {}, const PromptTemplate& tmpl = {});

}  // namespace dlbench::harness
