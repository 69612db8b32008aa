#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlbench/harness/verdict.hpp"

namespace dlbench::harness {

struct ModelEndpointConfig {
    std::string baseUrl = "https://api.openai.com/v1";
    std::string model = "gpt-4o";
    std::string credentialEnv = "OPENAI_API_KEY";  // name of the variable, never its value
    double temperature = 0.0;
    std::chrono::milliseconds timeout{60'000};
    int maxRetries = 3;
};

struct HarnessConfig {
    ModelEndpointConfig endpoint;
    int parallelism = 4;
    GradingMode gradingMode = GradingMode::PaperBinary;
    std::optional<std::filesystem::path> cueLexicon;
    bool forcedChoice = false;
    std::string categoryNoun = "Arkon";
    std::string article = "an";
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses `key = value` lines (`#` comments, optional `[section]` headers
/// which are ignored). Values are double-quoted strings, numbers or
/// true/false. Keys: base_url, model, api_key_env, temperature,
/// timeout_seconds, max_retries, parallelism, grading_mode, cue_lexicon,
/// forced_choice, category_noun, article. A relative cue_lexicon path is
/// resolved against `baseDir`.
HarnessConfig parseConfig(std::string_view text, const std::filesystem::path& baseDir = {});
HarnessConfig loadConfig(const std::filesystem::path& path);

class CredentialMissing : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by transports for a failed attempt; the runner retries these.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::string caseId;
    std::string model;
    double temperature = 0.0;
    std::vector<ChatMessage> messages;
};

class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    /// Returns the assistant reply text. Must be safe to call concurrently.
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// Reads the credential from the environment; throws CredentialMissing when
/// the variable is unset or empty.
std::string resolveCredential(const ModelEndpointConfig& cfg);

/// Chat-completions over HTTP(S): POST <baseUrl>/chat/completions with a
/// bearer token, reply taken from choices[0].message.content.
class HttpChatTransport final : public ChatTransport {
public:
    /// Resolves the credential up front, so a missing key fails before any
    /// connection is attempted.
    explicit HttpChatTransport(ModelEndpointConfig cfg);

    std::string complete(const ChatRequest& request) override;

private:
    ModelEndpointConfig cfg_;
    std::string credential_;
    std::string origin_;  // scheme://host[:port]
    std::string pathPrefix_;
};

/// Offline transport: `<dir>/<case-id>.txt` holds the reply to the first
/// turn and `<case-id>.followup.txt` the reply to the forced-choice turn.
/// `<case-id>.fault` simulates a failing transport; each attempt throws
/// TransportError with the file's content.
class FixtureTransport final : public ChatTransport {
public:
    explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::string complete(const ChatRequest& request) override;

private:
    std::filesystem::path dir_;
};

}  // namespace dlbench::harness
