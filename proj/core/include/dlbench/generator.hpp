#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dlbench/reasoner.hpp"
#include "dlbench/theory.hpp"
#include "dlbench/translator.hpp"

namespace dlbench {

enum class Family { Chain, Chains, Circle, Circles, Dag, LevelsMinus, Levels, Hierarchies };

inline constexpr Family kAllFamilies[] = {Family::Chain,       Family::Chains, Family::Circle, Family::Circles,
                                          Family::Dag,         Family::LevelsMinus, Family::Levels,
                                          Family::Hierarchies};

/// Display name: chain, chains, circle, circles, dag, levels-, levels, hierarchies.
std::string_view familyName(Family f) noexcept;
/// File-safe spelling used in case ids (`levels-` becomes `levels-minus`).
std::string_view familyToken(Family f) noexcept;
/// Accepts the display name, the file token and `levelsMinus`.
std::optional<Family> familyFromString(std::string_view s) noexcept;
bool familyTakesK(Family f) noexcept;

struct FamilySpec {
    Family family = Family::Chain;
    int n = 1;
    std::optional<int> k;

    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

/// `chain(8)`, `dag(3,2)`, `levels-(5)`.
std::string label(const FamilySpec& spec);

enum class GeneratorErrc { InvalidSpec, VariantUnsatisfied, FreshAtomCollision };

class GeneratorError : public std::runtime_error {
public:
    GeneratorError(GeneratorErrc code, std::string message) : std::runtime_error(std::move(message)), code_(code) {}
    GeneratorErrc code() const noexcept { return code_; }

private:
    GeneratorErrc code_;
};

/// Throws GeneratorError(InvalidSpec).
void validate(const FamilySpec& spec);

/// `A0000042`.
std::string atomName(std::size_t index);
/// Break atom for index i: the zero padding of atomName(i) replaced by 1s,
/// e.g. 3 -> `A1111113`, 14 -> `A1111114`.
std::string breakAtomName(std::size_t index);

Theory generate(const FamilySpec& spec);

enum class Polarity { Provable, Unprovable };
enum class Ordering { Sequential, Random };

std::string_view toString(Polarity p) noexcept;
std::string_view toString(Ordering o) noexcept;

struct CaseSetting {
    Polarity polarity = Polarity::Provable;
    Ordering ordering = Ordering::Sequential;
    std::uint64_t shuffleSeed = 0;  // ignored for Sequential

    friend bool operator==(const CaseSetting&, const CaseSetting&) = default;
};

/// Column label of a setting: `-∂-rand`, `+∂-rand`, `-∂-seq`, `+∂-seq`.
std::string settingLabel(Polarity p, Ordering o);

struct VariantOptions {
    /// Atom index whose body occurrence is renamed in chain/chains.
    /// Default: max(1, floor(n/2) - 1).
    std::optional<std::size_t> chainBreakIndex;
    /// Atom index renamed in every dag body. Default: ceil(nk/2) + 1.
    std::optional<std::size_t> dagBreakIndex;
};

/// Applies the construction that makes A0000000 provable (+d) or not for the
/// given family, then re-runs the reasoner and throws
/// GeneratorError(VariantUnsatisfied) if the verdict disagrees.
///
///   chain, chains  unprovable: one body occurrence renamed to a break atom
///   dag            unprovable: every body occurrence of one atom renamed
///   circle(s)      provable: fact a_{n-1} added
///   levels(-)      opposite of the parity outcome: fact a_n added
///   hierarchies    unprovable: the body occurrence of the leaf on the
///                  first-supporter path renamed
Theory makeVariant(const Theory& base, const FamilySpec& spec, Polarity polarity, const VariantOptions& opts = {});

struct BenchmarkCase {
    FamilySpec spec;
    CaseSetting setting;
    Theory theory;
    std::vector<std::string> nlText;
    Verdict expected = Verdict::Undetermined;
    std::string queryAtom = "A0000000";

    std::string id() const;
};

/// `<family>_<params>_<pos|neg>_<seq|rand>_<seed>`, e.g. `dag_3-2_neg_rand_7`.
std::string caseId(const FamilySpec& spec, const CaseSetting& setting);

/// Reproducible Fisher-Yates permutation of [0, size) driven by mt19937_64.
std::vector<std::size_t> shufflePermutation(std::size_t size, std::uint64_t seed);

BenchmarkCase makeCase(const FamilySpec& spec, const CaseSetting& setting, const VariantOptions& opts = {},
                       const RenderConfig& render = {});

/// Writes `<root>/<id>/theory.dfl`, `knowledge.txt` and `meta.json`.
BenchmarkCase emitCase(const FamilySpec& spec, const CaseSetting& setting, const std::filesystem::path& root,
                       const VariantOptions& opts = {}, const RenderConfig& render = {});

struct LoadedCase {
    BenchmarkCase benchmark;  // expected recomputed from theory.dfl
    std::optional<Verdict> recordedExpected;  // as stored in meta.json
    std::filesystem::path directory;
};

/// Reads a case directory written by emitCase. Throws std::runtime_error on
/// missing files or a theory that does not parse.
LoadedCase loadCase(const std::filesystem::path& dir);

/// Case directories (those holding a meta.json) below root, sorted by name.
std::vector<std::filesystem::path> listCases(const std::filesystem::path& root);

/// The eight instances evaluated in the benchmark's experiments.
std::vector<FamilySpec> paperPreset();

/// The four settings in report column order: -rand, +rand, -seq, +seq.
std::vector<CaseSetting> paperSettings(std::uint64_t seed);

}  // namespace dlbench
