#include "dlbench/harness/endpoint.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifdef DLBENCH_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace dlbench::harness {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Value {
    std::string text;
    bool quoted = false;
};

}  // namespace

HarnessConfig parseConfig(std::string_view text, const std::filesystem::path& baseDir) {
    HarnessConfig cfg;
    std::istringstream in{std::string(text)};
    std::size_t lineNo = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineNo;
        auto where = [&] { return "config line " + std::to_string(lineNo) + ": "; };

        // Strip a comment unless the '#' sits inside a quoted string.
        bool inQuote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') inQuote = !inQuote;
            if (line[i] == '#' && !inQuote) {
                line.resize(i);
                break;
            }
        }
        auto stmt = trim(line);
        if (stmt.empty() || stmt.front() == '[') continue;

        auto eq = stmt.find('=');
        if (eq == std::string::npos) throw ConfigError(where() + "expected key = value");
        auto key = trim(stmt.substr(0, eq));
        auto raw = trim(stmt.substr(eq + 1));
        Value v;
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            v = {raw.substr(1, raw.size() - 2), true};
        } else {
            v = {raw, false};
        }

        auto asString = [&] {
            if (!v.quoted) throw ConfigError(where() + key + " expects a quoted string");
            return v.text;
        };
        auto asNumber = [&] {
            try {
                std::size_t used = 0;
                double d = std::stod(v.text, &used);
                if (v.quoted || used != v.text.size()) throw std::invalid_argument(v.text);
                return d;
            } catch (const std::logic_error&) {
                throw ConfigError(where() + key + " expects a number");
            }
        };
        auto asBool = [&] {
            if (v.text == "true" && !v.quoted) return true;
            if (v.text == "false" && !v.quoted) return false;
            throw ConfigError(where() + key + " expects true or false");
        };

        if (key == "base_url") {
            cfg.endpoint.baseUrl = asString();
        } else if (key == "model") {
            cfg.endpoint.model = asString();
        } else if (key == "api_key_env") {
            cfg.endpoint.credentialEnv = asString();
        } else if (key == "temperature") {
            cfg.endpoint.temperature = asNumber();
        } else if (key == "timeout_seconds") {
            cfg.endpoint.timeout = std::chrono::milliseconds(static_cast<long long>(asNumber() * 1000));
        } else if (key == "max_retries") {
            cfg.endpoint.maxRetries = static_cast<int>(asNumber());
        } else if (key == "parallelism") {
            cfg.parallelism = static_cast<int>(asNumber());
            if (cfg.parallelism < 1) throw ConfigError(where() + "parallelism must be at least 1");
        } else if (key == "grading_mode") {
            auto mode = gradingModeFromString(asString());
            if (!mode) throw ConfigError(where() + "grading_mode must be \"paper\" or \"strict\"");
            cfg.gradingMode = *mode;
        } else if (key == "cue_lexicon") {
            std::filesystem::path p = asString();
            cfg.cueLexicon = p.is_relative() && !baseDir.empty() ? baseDir / p : p;
        } else if (key == "forced_choice") {
            cfg.forcedChoice = asBool();
        } else if (key == "category_noun") {
            cfg.categoryNoun = asString();
        } else if (key == "article") {
            cfg.article = asString();
        } else {
            throw ConfigError(where() + "unknown key '" + key + "'");
        }
    }
    if (cfg.endpoint.maxRetries < 0) throw ConfigError("max_retries must not be negative");
    return cfg;
}

HarnessConfig loadConfig(const std::filesystem::path& path) {
    return parseConfig(readFile(path), path.parent_path());
}

std::string resolveCredential(const ModelEndpointConfig& cfg) {
    const char* value = std::getenv(cfg.credentialEnv.c_str());
    if (value == nullptr || *value == '\0') {
        throw CredentialMissing("environment variable " + cfg.credentialEnv + " is not set");
    }
    return value;
}

HttpChatTransport::HttpChatTransport(ModelEndpointConfig cfg) : cfg_(std::move(cfg)) {
    credential_ = resolveCredential(cfg_);
    auto scheme = cfg_.baseUrl.find("://");
    if (scheme == std::string::npos) throw ConfigError("base_url needs a scheme: " + cfg_.baseUrl);
    auto slash = cfg_.baseUrl.find('/', scheme + 3);
    origin_ = cfg_.baseUrl.substr(0, slash);
    pathPrefix_ = slash == std::string::npos ? "" : cfg_.baseUrl.substr(slash);
    while (!pathPrefix_.empty() && pathPrefix_.back() == '/') pathPrefix_.pop_back();
#ifndef DLBENCH_WITH_OPENSSL
    if (cfg_.baseUrl.starts_with("https://")) throw ConfigError("built without TLS support; use an http:// base_url");
#endif
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
    nlohmann::json body = {{"model", request.model}, {"temperature", request.temperature}};
    body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers{{"Authorization", "Bearer " + credential_}};
    auto res = client.Post(pathPrefix_ + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) {
        throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed completion: ") + e.what());
    }
}

std::string FixtureTransport::complete(const ChatRequest& request) {
    if (auto fault = dir_ / (request.caseId + ".fault"); std::filesystem::exists(fault)) {
        throw TransportError(trim(readFile(fault)));
    }
    // A follow-up turn carries the first reply as an assistant message.
    const bool followUp = request.messages.size() > 2;
    auto path = dir_ / (request.caseId + (followUp ? ".followup.txt" : ".txt"));
    if (!std::filesystem::exists(path)) throw TransportError("no fixture " + path.filename().string());
    return readFile(path);
}

}  // namespace dlbench::harness
