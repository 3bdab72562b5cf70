#include <httplib.h>

#include "annoprov/api.hpp"
#include "annoprov/errors.hpp"

namespace annoprov
{
    struct HttpServer::State
    {
        ApiService& api;
        ServerOptions options;
        httplib::Server server;
        int port = -1;

        State(ApiService& service, ServerOptions opts) : api{service}, options{std::move(opts)} {}
    };

    namespace
    {
        void reply(ApiService& api, const httplib::Request& request, httplib::Response& response)
        {
            QueryParams query(request.params.begin(), request.params.end());
            const auto result = api.handle(request.method, request.path, query, request.body);
            response.status = result.status;
            response.set_content(result.body.dump(), "application/json; charset=utf-8");
        }
    } // namespace

    HttpServer::HttpServer(ApiService& api, ServerOptions options) : state_{std::make_unique<State>(api, std::move(options))}
    {
        auto& server = state_->server;
        auto handler = [this](const httplib::Request& request, httplib::Response& response) { reply(state_->api, request, response); };
        server.Get(R"(/v1/.*)", handler);
        server.Post(R"(/v1/.*)", handler);
        server.Put(R"(/v1/.*)", handler);
        server.Delete(R"(/v1/.*)", handler);
        if (state_->options.static_dir && !server.set_mount_point("/", state_->options.static_dir->string()))
            throw Error("static directory not found: " + state_->options.static_dir->string());
    }

    HttpServer::~HttpServer() { stop(); }

    int HttpServer::bind()
    {
        auto& s = *state_;
        if (s.options.port == 0)
            s.port = s.server.bind_to_any_port(s.options.host);
        else
            s.port = s.server.bind_to_port(s.options.host, s.options.port) ? s.options.port : -1;
        if (s.port < 0)
            throw Error("cannot bind " + s.options.host + ":" + std::to_string(s.options.port));
        return s.port;
    }

    void HttpServer::listen()
    {
        if (state_->port < 0)
            bind();
        state_->server.listen_after_bind();
    }

    void HttpServer::stop()
    {
        if (state_)
            state_->server.stop();
    }

} // namespace annoprov
