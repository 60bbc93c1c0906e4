#include "abn/stub.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include "abn/error.hpp"

namespace abn {

struct EchoStub::Impl {
    httplib::Server server;
    std::thread worker;
    std::string host = "127.0.0.1";
    int port = 0;
    mutable std::mutex mu;
    std::vector<nlohmann::json> requests;

    void install() {
        auto handler = [this](auto reply_fn) {
            return [this, reply_fn](const httplib::Request& req, httplib::Response& res) {
                nlohmann::json body;
                try {
                    body = nlohmann::json::parse(req.body);
                } catch (const nlohmann::json::parse_error&) {
                    res.status = 400;
                    res.set_content(R"({"error":"invalid JSON"})", "application/json");
                    return;
                }
                {
                    std::lock_guard lock(mu);
                    requests.push_back(body);
                }
                res.set_content(reply_fn(body).dump(), "application/json");
            };
        };
        server.Post("/generate", handler(&EchoStub::generate_reply));
        server.Post("/judge", handler(&EchoStub::judge_reply));
    }
};

EchoStub::EchoStub() : impl_(std::make_unique<Impl>()) { impl_->install(); }

EchoStub::~EchoStub() { stop(); }

int EchoStub::start(const std::string& host, int port) {
    impl_->host = host;
    impl_->port = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (impl_->port < 0) throw Error(Errc::EndpointUnreachable, fmt::format("cannot bind {}:{}", host, port));
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void EchoStub::serve_forever(const std::string& host, int port) {
    impl_->host = host;
    impl_->port = port;
    if (!impl_->server.listen(host, port))
        throw Error(Errc::EndpointUnreachable, fmt::format("cannot listen on {}:{}", host, port));
}

void EchoStub::stop() {
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

std::string EchoStub::url(const std::string& path) const {
    return fmt::format("http://{}:{}{}", impl_->host, impl_->port, path);
}

std::vector<nlohmann::json> EchoStub::requests() const {
    std::lock_guard lock(impl_->mu);
    return impl_->requests;
}

nlohmann::json EchoStub::generate_reply(const nlohmann::json& request) {
    return {{"text", "[echo] " + request.value("input", std::string())}};
}

nlohmann::json EchoStub::judge_reply(const nlohmann::json& request) {
    const auto instruction = request.value("instruction", std::string());
    int rating = 3;
    if (instruction.find("toxic") != std::string::npos)
        rating = 0;
    else if (instruction.find("scale of 0 to 1") != std::string::npos)
        rating = 1;
    return {{"rating", rating}, {"rationale", "stub verdict"}};
}

}  // namespace abn
