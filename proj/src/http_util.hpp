#pragma once

#include <string>
#include <string_view>

namespace gtown {

struct HttpTarget {
  std::string origin;  // scheme://host[:port]
  std::string path;    // absolute path
};

struct HttpReply {
  int status = 0;
  std::string body;
};

/// Splits `url` into origin and path, appending `suffix` unless the path
/// already ends with it. Throws std::invalid_argument on a malformed URL.
HttpTarget split_url(std::string_view url, std::string_view suffix);

/// Throws std::runtime_error on connection failure.
HttpReply http_post_json(const HttpTarget& target, const std::string& body, const std::string& bearer,
                         int timeout_seconds);
HttpReply http_get(const HttpTarget& target, int timeout_seconds);

}  // namespace gtown
