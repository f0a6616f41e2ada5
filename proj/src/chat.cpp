#include "graphictown/chat.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>
#include <openssl/sha.h>

#include "http_util.hpp"

namespace gtown {

ChatRequest make_request(std::string model, std::string prompt, double temperature) {
  ChatRequest r;
  r.model = std::move(model);
  r.temperature = temperature;
  r.messages.push_back({"user", std::move(prompt), std::nullopt});
  return r;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw std::invalid_argument("base64 length is not a multiple of 4");
  std::string out(3 * text.size() / 4, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw std::invalid_argument("malformed base64");
  std::size_t pad = 0;
  while (pad < 2 && pad < text.size() && text[text.size() - 1 - pad] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

json request_to_json(const ChatRequest& request) {
  json msgs = json::array();
  for (const auto& m : request.messages) {
    json j = {{"role", m.role}, {"content", m.content}};
    if (m.image_png) j["image_sha256"] = sha256_hex(*m.image_png);
    msgs.push_back(std::move(j));
  }
  return {{"model", request.model}, {"messages", msgs}, {"temperature", request.temperature}};
}

std::string request_key(const ChatRequest& request) { return sha256_hex(request_to_json(request).dump()); }

HttpChatClient::HttpChatClient(HttpClientOptions options) : options_(std::move(options)) {}

ChatResponse HttpChatClient::complete(const ChatRequest& request) {
  json body = {{"model", request.model}, {"temperature", request.temperature}, {"messages", json::array()}};
  for (const auto& m : request.messages) {
    if (!m.image_png) {
      body["messages"].push_back({{"role", m.role}, {"content", m.content}});
      continue;
    }
    json parts = json::array();
    parts.push_back({{"type", "text"}, {"text", m.content}});
    parts.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64_encode(*m.image_png)}}}});
    body["messages"].push_back({{"role", m.role}, {"content", parts}});
  }
  HttpReply reply;
  try {
    HttpTarget target = split_url(options_.endpoint, "/chat/completions");
    reply = http_post_json(target, body.dump(), options_.api_key, options_.timeout_seconds);
  } catch (const std::exception& e) {
    throw ChatError(std::string("chat endpoint: ") + e.what());
  }
  if (reply.status != 200)
    throw ChatError("chat endpoint returned HTTP " + std::to_string(reply.status) + ": " + reply.body.substr(0, 200));
  json doc = json::parse(reply.body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty())
    throw ChatError("chat endpoint returned an unexpected payload");
  const json& msg = doc["choices"][0].value("message", json::object());
  ChatResponse out;
  out.content = msg.contains("content") && msg["content"].is_string() ? msg["content"].get<std::string>() : "";
  if (doc.contains("usage") && doc["usage"].is_object())
    out.usage = TokenUsage{doc["usage"].value("prompt_tokens", 0), doc["usage"].value("completion_tokens", 0)};
  return out;
}

Cassette::Cassette(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.contains("entries") || !doc["entries"].is_object())
    throw std::runtime_error("cassette " + path_.string() + " is not a valid cassette file");
  for (auto it = doc["entries"].begin(); it != doc["entries"].end(); ++it) entries_[it.key()] = it.value();
}

std::optional<ChatResponse> Cassette::find(const ChatRequest& request) const {
  const std::string key = request_key(request);
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return ChatResponse{it->second.at("response").value("content", ""), std::nullopt};
}

void Cassette::insert(const ChatRequest& request, const ChatResponse& response) {
  json entry = {{"request", request_to_json(request)}, {"response", {{"content", response.content}}}};
  const std::string key = request_key(request);
  std::lock_guard lock(mutex_);
  entries_[key] = std::move(entry);
  dirty_ = true;
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void Cassette::save() const {
  if (path_.empty()) throw std::logic_error("cassette has no path");
  {
    std::lock_guard lock(mutex_);
    if (!dirty_ && std::filesystem::exists(path_)) return;
  }
  save_as(path_);
}

void Cassette::save_as(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  json doc = {{"version", 1}, {"entries", json::object()}};
  for (const auto& [k, v] : entries_) doc["entries"][k] = v;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(1) << "\n";
  if (!out) throw std::runtime_error("cannot write cassette " + path.string());
  if (path == path_) dirty_ = false;
}

ChatResponse CassetteClient::complete(const ChatRequest& request) {
  if (auto hit = cassette_.find(request)) return *hit;
  if (!upstream_) throw ChatError("cassette miss for request " + request_key(request));
  ChatResponse r = upstream_->complete(request);
  cassette_.insert(request, r);
  return r;
}

}  // namespace gtown
