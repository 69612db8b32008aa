#include "dlbench/harness/prompt.hpp"

namespace dlbench::harness {

namespace {

void replaceAll(std::string& s, const std::string& from, const std::string& to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

}  // namespace

PromptBundle buildPrompt(const BenchmarkCase& c, const RenderConfig& render, const PromptTemplate& tmpl) {
    PromptBundle out;
    out.caseId = c.id();
    out.systemInstruction = tmpl.systemInstruction;

    std::string knowledge;
    for (std::size_t i = 0; i < c.nlText.size(); ++i) knowledge += (i ? "\n" : "") + c.nlText[i];
    if (c.nlText.empty()) out.warnings.push_back(out.caseId + ": empty knowledge block");

    // Question placeholders first so that knowledge text is never rescanned.
    std::string user = tmpl.userTemplate;
    replaceAll(user, "{atom}", c.queryAtom);
    replaceAll(user, "{article}", render.article);
    replaceAll(user, "{noun}", render.categoryNoun);
    replaceAll(user, "{theory}", knowledge);
    out.userMessage = std::move(user);
    return out;
}

}  // namespace dlbench::harness
