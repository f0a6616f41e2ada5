#include "http_util.hpp"

#include <stdexcept>

#include <httplib.h>

namespace gtown {

HttpTarget split_url(std::string_view url, std::string_view suffix) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0)
    throw std::invalid_argument("URL \"" + std::string(url) + "\" has no scheme");
  const std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https")
    throw std::invalid_argument("unsupported URL scheme \"" + std::string(scheme) + "\"");
  const auto path_start = url.find('/', scheme_end + 3);
  HttpTarget t;
  t.origin = std::string(url.substr(0, path_start));
  if (t.origin.size() <= scheme_end + 3) throw std::invalid_argument("URL \"" + std::string(url) + "\" has no host");
  std::string path = path_start == std::string_view::npos ? "" : std::string(url.substr(path_start));
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (path.size() < suffix.size() || path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0)
    path += suffix;
  t.path = path.empty() ? "/" : path;
  return t;
}

namespace {

httplib::Client make_client(const HttpTarget& target, int timeout_seconds) {
  httplib::Client cli(target.origin);
  cli.set_connection_timeout(timeout_seconds < 10 ? timeout_seconds : 10, 0);
  cli.set_read_timeout(timeout_seconds, 0);
  cli.set_write_timeout(timeout_seconds, 0);
  return cli;
}

HttpReply to_reply(const httplib::Result& res, const HttpTarget& target) {
  if (!res)
    throw std::runtime_error(target.origin + target.path + ": " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

}  // namespace

HttpReply http_post_json(const HttpTarget& target, const std::string& body, const std::string& bearer,
                         int timeout_seconds) {
  auto cli = make_client(target, timeout_seconds);
  httplib::Headers headers;
  if (!bearer.empty()) headers.emplace("Authorization", "Bearer " + bearer);
  return to_reply(cli.Post(target.path, headers, body, "application/json"), target);
}

HttpReply http_get(const HttpTarget& target, int timeout_seconds) {
  auto cli = make_client(target, timeout_seconds);
  return to_reply(cli.Get(target.path), target);
}

}  // namespace gtown
