#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "lrlm/error.hpp"
#include "lrlm/oracle.hpp"

namespace lrlm {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("remote URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::size_t count_tokens(const std::string& text) {
  return Document::from_text(text).size();
}

}  // namespace

RemoteOracle::RemoteOracle(OracleProfile profile, RemoteConfig config)
    : Oracle(std::move(profile)), config_(std::move(config)) {
  if (config_.url.empty()) throw ConfigError("remote backend requires a URL");
  parse_url(config_.url);
}

OracleReply RemoteOracle::do_call(const Document& prompt, std::uint64_t index) {
  const auto ep = parse_url(config_.url);
  httplib::Client client(ep.origin);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (const char* tok = std::getenv(config_.token_env.c_str()); tok && *tok)
    headers.emplace("Authorization", std::string("Bearer ") + tok);

  const nlohmann::json body = {{"prompt", prompt.text()}, {"max_tokens", config_.max_tokens}};
  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool transport = err == httplib::Error::Connection ||
                           err == httplib::Error::ConnectionTimeout ||
                           err == httplib::Error::Read || err == httplib::Error::Write;
    throw OracleError(transport ? "Timeout" : "HttpError", index, httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300)
    throw OracleError("HttpError", index, "status " + std::to_string(res->status));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw OracleError("MalformedResponse", index, e.what());
  }
  if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
    throw OracleError("MalformedResponse", index, "response has no string field 'text'");

  OracleReply out;
  out.answer = reply["text"].get<std::string>();
  out.record = priced(prompt.size(), count_tokens(out.answer));
  return out;
}

}  // namespace lrlm
