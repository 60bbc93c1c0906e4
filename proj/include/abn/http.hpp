#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace abn {

struct Endpoint {
    std::string url;  // http://host:port/path
    int timeout_ms = 30000;
    int retries = 2;
    // Name of the environment variable holding a bearer token, if any.
    std::string api_key_env = "ABNSIM_API_KEY";
};

// POST a JSON body and parse the JSON reply. Retries transport failures and
// 5xx replies; throws Error{EndpointUnreachable} once the budget is spent.
nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body);

}  // namespace abn
