#include "abn/http.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <httplib.h>

#include "abn/error.hpp"

namespace abn {

namespace {

struct Target {
    std::string base;  // scheme://host:port
    std::string path;
};

Target split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0)
        throw Error(Errc::ConfigError, "endpoint must be an http:// URL: " + url);
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body) {
    const auto target = split_url(endpoint.url);
    httplib::Client client(target.base);
    const auto secs = endpoint.timeout_ms / 1000;
    const auto usecs = (endpoint.timeout_ms % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!endpoint.api_key_env.empty())
        if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key)
            headers.emplace("Authorization", std::string("Bearer ") + key);

    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= endpoint.retries; ++attempt) {
        auto res = client.Post(target.path, headers, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = fmt::format("HTTP {}", res->status);
            continue;
        }
        if (res->status != 200)
            throw Error(Errc::EndpointUnreachable, fmt::format("{} answered HTTP {}", endpoint.url, res->status));
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::EndpointUnreachable, fmt::format("{} sent invalid JSON: {}", endpoint.url, e.what()));
        }
    }
    throw Error(Errc::EndpointUnreachable,
                fmt::format("{} after {} attempts: {}", endpoint.url, endpoint.retries + 1, last_error));
}

}  // namespace abn
