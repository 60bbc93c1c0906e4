#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace abn {

// Deterministic stand-in for the generator and judge endpoints.
//   POST /generate  -> {"text": "[echo] " + input}
//   POST /judge     -> the passing rating for the facet's scale
class EchoStub {
public:
    EchoStub();
    ~EchoStub();
    EchoStub(const EchoStub&) = delete;
    EchoStub& operator=(const EchoStub&) = delete;

    // Binds and serves on a background thread; port 0 picks a free port.
    // Returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    // Blocks in the calling thread until stop() is called elsewhere.
    void serve_forever(const std::string& host, int port);

    std::string url(const std::string& path) const;
    std::vector<nlohmann::json> requests() const;

    static nlohmann::json generate_reply(const nlohmann::json& request);
    static nlohmann::json judge_reply(const nlohmann::json& request);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace abn
