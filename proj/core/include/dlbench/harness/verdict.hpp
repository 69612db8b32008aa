#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlbench/reasoner.hpp"

namespace dlbench::harness {

enum class Extracted { Affirmative, Negative, NoConclusion, Unparseable };
enum class Grade { Correct, Error, Unparseable };
enum class GradingMode { PaperBinary, StrictTernary };

std::string_view toString(Extracted e) noexcept;
std::string_view toString(Grade g) noexcept;
std::string_view toString(GradingMode m) noexcept;
std::optional<Extracted> extractedFromString(std::string_view s) noexcept;
std::optional<Grade> gradeFromString(std::string_view s) noexcept;
/// Accepts `paper`, `PaperBinary`, `strict`, `StrictTernary`.
std::optional<GradingMode> gradingModeFromString(std::string_view s) noexcept;

/// Lexical cues for verdict extraction, checked in the order negative,
/// no-conclusion, affirmative. Cues are matched case-insensitively on word
/// boundaries and may use the placeholders `{atom}`, `{article}` and
/// `{noun}`; a leading `^` anchors a cue to the start of a sentence.
struct CueLexicon {
    std::string version;
    std::vector<std::string> negative;
    std::vector<std::string> noConclusion;
    std::vector<std::string> affirmative;

    /// Built-in lexicon; identical to share/cues.json.
    static CueLexicon defaults();
    /// Throws std::runtime_error on unreadable or malformed files.
    static CueLexicon load(const std::filesystem::path& path);
};

struct ExtractionContext {
    std::string atom = "A0000000";
    std::string article = "an";
    std::string noun = "Arkon";
};

/// Looks at the last paragraph of the response. Sentences that mention the
/// queried atom are preferred over the rest; the last sentence carrying any
/// cue decides, with negative cues outranking no-conclusion cues outranking
/// affirmative ones.
Extracted extractVerdict(std::string_view response, const CueLexicon& lexicon = CueLexicon::defaults(),
                         const ExtractionContext& ctx = {});

/// Reads a reply to the YES / NO / CANNOT CONCLUDE follow-up.
Extracted extractForcedChoice(std::string_view reply);

/// PaperBinary: ProvablyTrue needs Affirmative; anything else needs Negative
/// or NoConclusion. StrictTernary: ProvablyFalse needs Negative and
/// Undetermined needs NoConclusion.
Grade grade(Extracted extracted, Verdict expected, GradingMode mode = GradingMode::PaperBinary);

}  // namespace dlbench::harness
