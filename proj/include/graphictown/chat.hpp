#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gtown {

using json = nlohmann::json;

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;
  /// Optional PNG attached to a user message (sent as a data URL).
  std::optional<std::string> image_png;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
};

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct ChatResponse {
  std::string content;
  std::optional<TokenUsage> usage;
};

/// Transport or protocol failure (not a malformed model answer).
class ChatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Must be safe to call from several threads at once.
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Single-user-message request.
ChatRequest make_request(std::string model, std::string prompt, double temperature = 0.0);

/// Images appear as their SHA-256 so keys stay short.
json request_to_json(const ChatRequest& request);
/// SHA-256 hex of the canonical (sorted-key, compact) request JSON.
std::string request_key(const ChatRequest& request);
std::string sha256_hex(std::string_view bytes);

std::string base64_encode(std::string_view bytes);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view text);

struct HttpClientOptions {
  std::string endpoint;  // base URL, e.g. http://host:8000/v1
  std::string api_key;   // sent as a Bearer token when non-empty
  int timeout_seconds = 120;
};

/// OpenAI-compatible /chat/completions client.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientOptions options);
  ChatResponse complete(const ChatRequest& request) override;

 private:
  HttpClientOptions options_;
};

/// Request-hash to response store, persisted as one JSON file.
class Cassette {
 public:
  Cassette() = default;
  /// Loads `path` if it exists.
  explicit Cassette(std::filesystem::path path);

  std::optional<ChatResponse> find(const ChatRequest& request) const;
  void insert(const ChatRequest& request, const ChatResponse& response);
  std::size_t size() const;
  /// Writes entries sorted by key; no-op when nothing changed.
  void save() const;
  void save_as(const std::filesystem::path& path) const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::string, json> entries_;
  mutable bool dirty_ = false;
};

/// Replays recorded responses; on a miss forwards to `upstream` and records,
/// or throws ChatError when there is no upstream.
class CassetteClient : public ChatClient {
 public:
  explicit CassetteClient(Cassette& cassette, ChatClient* upstream = nullptr)
      : cassette_(cassette), upstream_(upstream) {}
  ChatResponse complete(const ChatRequest& request) override;

 private:
  Cassette& cassette_;
  ChatClient* upstream_;
};

/// Answers from a callback. The callback sees the whole request.
class ScriptedClient : public ChatClient {
 public:
  using Script = std::function<std::string(const ChatRequest&)>;
  explicit ScriptedClient(Script script) : script_(std::move(script)) {}
  ChatResponse complete(const ChatRequest& request) override { return {script_(request), std::nullopt}; }

 private:
  Script script_;
};

}  // namespace gtown
