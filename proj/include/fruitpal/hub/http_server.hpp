#pragma once

#include <memory>
#include <string>

#include "fruitpal/hub/hub.hpp"

namespace fruitpal::hub {

struct ServerOptions {
    /// When non-empty, every endpoint except /healthz needs
    /// "Authorization: Bearer <token>" (or ?token=<token> for browsers
    /// opening the stream).
    std::string token;
};

/// HTTP front end for a Hub.
///
///   POST /messages             publish one message (JSON body)
///   POST /alerts/{id}/ack      body {"caregiver_id": "...", "at": tick?}
///   GET  /messages?after=&kinds=&device=&limit=
///                              poll the log
///   GET  /stream?client_id=&after=&kinds=&device=
///                              chunked NDJSON push; blank lines are keepalives
///   GET  /healthz
///
/// Errors are {"error": "..."} with 400 (malformed), 401, 404 (unknown
/// alert), 422 (kind/payload mismatch) or 503 (log write failed).
class HubServer {
public:
    HubServer(Hub& hub, ServerOptions options = {});
    ~HubServer();

    HubServer(const HubServer&) = delete;
    HubServer& operator=(const HubServer&) = delete;

    /// Binds; port 0 picks a free port. Returns the bound port.
    /// Throws ConfigError when binding fails.
    int bind(const std::string& host, int port);

    /// Serves until stop(). Call after bind().
    void run();
    /// run() on a background thread.
    void start();
    void stop();

    int port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fruitpal::hub
