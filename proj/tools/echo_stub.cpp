#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "abn/stub.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Echo stand-in for the generation and judge endpoints"};
    std::string host = "127.0.0.1";
    int port = 8765;
    app.add_option("--host", host, "Bind address");
    app.add_option("--port", port, "Bind port");
    CLI11_PARSE(app, argc, argv);

    abn::EchoStub stub;
    fmt::print("serving http://{}:{}/generate and /judge\n", host, port);
    std::fflush(stdout);
    stub.serve_forever(host, port);
    return 0;
}
