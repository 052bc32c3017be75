#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace semfabric {

struct HttpResponse {
    int status = 0;  // 0 = transport failure, body carries the reason
    std::string body;

    bool ok() const { return status == 200; }
    bool transport_failed() const { return status == 0; }
};

// Minimal HTTP client abstraction so the agent runs identically against real
// sockets and in-process service cores, and so tests can intercept traffic.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse get(const std::string& endpoint, const std::string& path) = 0;
    virtual HttpResponse post(const std::string& endpoint, const std::string& path,
                              const std::string& body) = 0;
};

// Anything that can answer requests directly (service cores implement this).
class HttpHandler {
public:
    virtual ~HttpHandler() = default;
    virtual HttpResponse handle(const std::string& method, const std::string& path,
                                const std::string& body) = 0;
};

// Routes requests to registered handlers by endpoint string; unknown
// endpoints fail like an unreachable host.
class InProcessTransport : public Transport {
public:
    void mount(const std::string& endpoint, std::shared_ptr<HttpHandler> handler);

    HttpResponse get(const std::string& endpoint, const std::string& path) override;
    HttpResponse post(const std::string& endpoint, const std::string& path,
                      const std::string& body) override;

private:
    HttpResponse dispatch(const std::string& method, const std::string& endpoint,
                          const std::string& path, const std::string& body);
    std::map<std::string, std::shared_ptr<HttpHandler>> handlers_;
};

// Real HTTP client over cpp-httplib. Endpoint format: http://host:port
class HttplibTransport : public Transport {
public:
    explicit HttplibTransport(int timeout_seconds = 10) : timeout_seconds_(timeout_seconds) {}

    HttpResponse get(const std::string& endpoint, const std::string& path) override;
    HttpResponse post(const std::string& endpoint, const std::string& path,
                      const std::string& body) override;

private:
    int timeout_seconds_;
};

struct ExchangeRecord {
    std::string method;
    std::string endpoint;
    std::string path;
    size_t request_body_bytes = 0;
    size_t response_body_bytes = 0;
    int status = 0;
};

// Decorator that logs every exchange; the byte-accounting oracle in tests
// replays these records against the agent's ledger.
class RecordingTransport : public Transport {
public:
    explicit RecordingTransport(Transport& inner) : inner_(inner) {}

    HttpResponse get(const std::string& endpoint, const std::string& path) override;
    HttpResponse post(const std::string& endpoint, const std::string& path,
                      const std::string& body) override;

    std::vector<ExchangeRecord> records() const;
    void clear();

private:
    Transport& inner_;
    mutable std::mutex mu_;
    std::vector<ExchangeRecord> records_;
};

}  // namespace semfabric
