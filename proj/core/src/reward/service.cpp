#include "ipt/service.hpp"

#include <httplib.h>

namespace ipt::reward {

namespace {

void send(httplib::Response& res, const RewardEngine::Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump() + "\n", "application/json");
}

std::string code_for(int status) {
    switch (status) {
    case 400: return "bad_request";
    case 404: return "not_found";
    case 405: return "method_not_allowed";
    case 413: return "payload_too_large";
    case 414: return "uri_too_long";
    default: return status >= 500 ? "internal_error" : "http_error";
    }
}

} // namespace

struct RewardService::Impl {
    explicit Impl(RewardConfig config) : engine(std::move(config)) {}

    RewardEngine engine;
    httplib::Server server;
    bool bound = false;
};

RewardService::RewardService(RewardConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
    auto& srv = impl_->server;
    RewardEngine& engine = impl_->engine;

    // Oversized bodies are rejected by the transport before a handler runs;
    // the error handler below gives them a structured body.
    srv.set_payload_max_length(engine.config().max_request_bytes);
    // SO_REUSEADDR only; the library default also sets SO_REUSEPORT, which
    // lets a second instance silently share the port.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });

    srv.Post("/verify", [&engine](const httplib::Request& req, httplib::Response& res) {
        send(res, engine.handle_verify(req.body));
    });
    srv.Post("/verify_batch", [&engine](const httplib::Request& req, httplib::Response& res) {
        send(res, engine.handle_verify_batch(req.body));
    });
    srv.Get(R"(/tasks/([^/]+))", [&engine](const httplib::Request& req, httplib::Response& res) {
        send(res, engine.handle_get_task(req.matches[1].str()));
    });
    srv.Post("/tasks", [&engine](const httplib::Request& req, httplib::Response& res) {
        send(res, engine.handle_register_task(req.body));
    });
    srv.Get("/healthz", [&engine](const httplib::Request&, httplib::Response& res) {
        send(res, engine.handle_healthz());
    });

    srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const RequestError e(res.status, code_for(res.status),
                             "HTTP " + std::to_string(res.status) + " for " + req.method + " " + req.path);
        res.set_content(error_body(e).dump() + "\n", "application/json");
    });
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unknown error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(error_body(RequestError(500, "internal_error", what)).dump() + "\n", "application/json");
    });
}

RewardService::~RewardService() { stop(); }

RewardEngine& RewardService::engine() noexcept { return impl_->engine; }

int RewardService::bind(const std::string& host, int port) {
    int bound = -1;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (impl_->server.bind_to_port(host, port)) {
        bound = port;
    }
    if (bound <= 0) throw ServiceError("cannot bind " + host + ":" + std::to_string(port));
    impl_->bound = true;
    return bound;
}

void RewardService::listen() {
    if (!impl_->bound) throw ServiceError("listen() before bind()");
    impl_->server.listen_after_bind();
}

void RewardService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void RewardService::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace ipt::reward
