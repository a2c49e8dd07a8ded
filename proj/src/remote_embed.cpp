#include <cmath>

#include "httplib.h"
#include "json.hpp"

#include "loglens/embed.hpp"
#include "loglens/errors.hpp"

namespace loglens::embed {
namespace {

// Splits "http://host:port/path" into client target and path. Scheme is
// optional and only http is spoken; embedding servers run on localhost or
// inside the same trust boundary.
struct Endpoint {
  std::string host_port;
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  std::string rest = url;
  const std::string scheme = "http://";
  if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
  if (rest.rfind("https://", 0) == 0)
    throw ConfigError("remote embedder speaks plain http only: " + url);
  auto slash = rest.find('/');
  Endpoint ep;
  ep.host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
  ep.path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (ep.host_port.empty()) throw ConfigError("remote endpoint has no host: " + url);
  return ep;
}

}  // namespace

std::vector<std::vector<double>> remote_embed(const std::string& endpoint,
                                              const std::vector<std::string>& texts,
                                              double timeout_s) {
  using Kind = RemoteEmbedError::Kind;
  if (texts.empty()) return {};

  Endpoint ep = split_endpoint(endpoint);
  httplib::Client client(ep.host_port);
  auto seconds = time_t(timeout_s);
  auto micros = time_t((timeout_s - double(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  nlohmann::json body{{"sentences", texts}};
  auto res = client.Post(ep.path, body.dump(), "application/json");
  if (!res)
    throw RemoteEmbedError(Kind::Transport,
                           "no response from " + endpoint + ": " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw RemoteEmbedError(Kind::HttpStatus,
                           "embedding server returned status " + std::to_string(res->status));

  nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("vectors") ||
      !parsed["vectors"].is_array())
    throw RemoteEmbedError(Kind::BadResponse, "response is not an object with a vectors array");

  const auto& rows = parsed["vectors"];
  if (rows.size() != texts.size())
    throw RemoteEmbedError(Kind::DimensionMismatch,
                           "expected " + std::to_string(texts.size()) + " vectors, got " +
                               std::to_string(rows.size()));

  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (!row.is_array())
      throw RemoteEmbedError(Kind::BadResponse, "vector entry is not an array");
    if (row.size() != kDimension)
      throw RemoteEmbedError(Kind::DimensionMismatch,
                             "expected dimension " + std::to_string(kDimension) + ", got " +
                                 std::to_string(row.size()));
    std::vector<double> values;
    values.reserve(kDimension);
    for (const auto& cell : row) {
      // JSON has no NaN literal; serializers emit null for non-finite values.
      if (cell.is_null())
        throw RemoteEmbedError(Kind::NonFinite, "vector entry is not finite");
      if (!cell.is_number())
        throw RemoteEmbedError(Kind::BadResponse, "vector entry holds a non-number");
      double v = cell.get<double>();
      if (!std::isfinite(v))
        throw RemoteEmbedError(Kind::NonFinite, "vector entry is not finite");
      values.push_back(v);
    }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace loglens::embed
