#include "fruitpal/hub/http_server.hpp"

#include <httplib.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "fruitpal/core/errors.hpp"

namespace fruitpal::hub {

namespace {

constexpr auto kStreamPoll = std::chrono::milliseconds(200);
constexpr const char* kJson = "application/json";

void reply_error(httplib::Response& res, int status, const std::string& what) {
    res.status = status;
    res.set_content(Json{{"error", what}}.dump(), kJson);
}

Filter filter_from_query(const httplib::Request& req) {
    Filter f;
    if (req.has_param("kinds")) {
        std::stringstream ss(req.get_param_value("kinds"));
        for (std::string k; std::getline(ss, k, ',');) {
            if (k.empty()) continue;
            const auto kind = parse_kind(k);
            if (!kind) throw ParseError("unknown message kind: " + k);
            f.kinds.insert(*kind);
        }
    }
    if (req.has_param("device")) f.device_id = req.get_param_value("device");
    return f;
}

std::uint64_t uint_param(const httplib::Request& req, const char* name, std::uint64_t fallback) {
    if (!req.has_param(name)) return fallback;
    const std::string v = req.get_param_value(name);
    try {
        std::size_t used = 0;
        const auto n = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ParseError(std::string("parameter ") + name + " must be a non-negative integer");
    }
}

Json receipt_json(const Receipt& r) {
    return Json{{"msg_id", r.msg_id}, {"cursor", r.cursor}, {"delivered_to", r.delivered_to}, {"duplicate", r.duplicate}};
}

}  // namespace

struct HubServer::Impl {
    Hub& hub;
    ServerOptions options;
    httplib::Server server;
    std::thread thread;
    std::atomic<bool> stopping{false};
    int port = -1;

    Impl(Hub& h, ServerOptions o) : hub(h), options(std::move(o)) { routes(); }

    bool authorized(const httplib::Request& req) const {
        if (options.token.empty()) return true;
        if (req.get_header_value("Authorization") == "Bearer " + options.token) return true;
        return req.has_param("token") && req.get_param_value("token") == options.token;
    }

    void routes() {
        server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
            if (req.path == "/healthz" || authorized(req)) return httplib::Server::HandlerResponse::Unhandled;
            reply_error(res, 401, "missing or wrong bearer token");
            return httplib::Server::HandlerResponse::Handled;
        });

        server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(Json{{"status", "ok"}, {"messages", hub.size()}, {"cursor", hub.last_cursor()}}.dump(),
                            kJson);
        });

        server.Post("/messages", [this](const httplib::Request& req, httplib::Response& res) {
            HubMessage m;
            try {
                m = message_from_json(Json::parse(req.body));
            } catch (const std::exception& e) {
                return reply_error(res, 400, e.what());
            }
            try {
                validate(m);
            } catch (const PublishError& e) {
                return reply_error(res, 422, e.what());
            }
            try {
                res.set_content(receipt_json(hub.publish(std::move(m))).dump(), kJson);
            } catch (const PublishError& e) {
                reply_error(res, 503, e.what());
            }
        });

        server.Post("/alerts/:id/ack", [this](const httplib::Request& req, httplib::Response& res) {
            std::string caregiver;
            Tick at = hub.now();
            try {
                const Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
                caregiver = body.at("caregiver_id").get<std::string>();
                at = body.value("at", at);
            } catch (const std::exception& e) {
                return reply_error(res, 400, std::string("expected {\"caregiver_id\": ...}: ") + e.what());
            }
            try {
                res.set_content(receipt_json(hub.acknowledge(req.path_params.at("id"), caregiver, at)).dump(), kJson);
            } catch (const NotFound& e) {
                reply_error(res, 404, e.what());
            } catch (const PublishError& e) {
                reply_error(res, 503, e.what());
            }
        });

        server.Get("/messages", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                const Cursor after = uint_param(req, "after", 0);
                const auto limit = uint_param(req, "limit", 1000);
                const auto msgs = hub.read_after(after, filter_from_query(req), limit);
                Json arr = Json::array();
                for (const auto& m : msgs) arr.push_back(message_to_json(m));
                res.set_content(Json{{"messages", arr}, {"cursor", msgs.empty() ? after : msgs.back().cursor}}.dump(),
                                kJson);
            } catch (const ParseError& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Get("/stream", [this](const httplib::Request& req, httplib::Response& res) {
            std::string client;
            Filter filter;
            std::optional<Cursor> after;
            try {
                client = req.has_param("client_id") ? req.get_param_value("client_id") : "";
                if (client.empty()) throw ParseError("client_id is required");
                filter = filter_from_query(req);
                if (req.has_param("after")) after = uint_param(req, "after", 0);
            } catch (const ParseError& e) {
                return reply_error(res, 400, e.what());
            }
            const auto generation = hub.subscribe(client, filter, after);
            res.set_chunked_content_provider(
                "application/x-ndjson",
                [this, client, generation](std::size_t, httplib::DataSink& sink) {
                    if (stopping) {
                        sink.done();
                        return true;
                    }
                    auto batch = hub.wait_receive(client, generation, kStreamPoll);
                    if (!batch) {
                        sink.done();
                        return true;
                    }
                    std::string out;
                    for (const auto& m : *batch) out += message_to_json(m).dump() + "\n";
                    if (out.empty()) out = "\n";  // keepalive; also detects a gone client
                    if (!sink.write(out.data(), out.size())) return false;
                    if (!batch->empty()) hub.ack(client, batch->back().cursor);
                    return true;
                },
                [this, client, generation](bool) { hub.disconnect(client, generation); });
        });
    }
};

HubServer::HubServer(Hub& hub, ServerOptions options) : impl_(std::make_unique<Impl>(hub, std::move(options))) {}

HubServer::~HubServer() { stop(); }

int HubServer::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
    impl_->port = bound;
    return bound;
}

void HubServer::run() { impl_->server.listen_after_bind(); }

void HubServer::start() {
    impl_->thread = std::thread([this] { run(); });
    impl_->server.wait_until_ready();
}

void HubServer::stop() {
    impl_->stopping = true;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

int HubServer::port() const noexcept { return impl_->port; }

}  // namespace fruitpal::hub
