#include "semfabric/transport.hpp"

#include <httplib.h>

namespace semfabric {

void InProcessTransport::mount(const std::string& endpoint, std::shared_ptr<HttpHandler> handler) {
    handlers_[endpoint] = std::move(handler);
}

HttpResponse InProcessTransport::dispatch(const std::string& method, const std::string& endpoint,
                                          const std::string& path, const std::string& body) {
    auto it = handlers_.find(endpoint);
    if (it == handlers_.end()) {
        return {0, "no route to endpoint: " + endpoint};
    }
    return it->second->handle(method, path, body);
}

HttpResponse InProcessTransport::get(const std::string& endpoint, const std::string& path) {
    return dispatch("GET", endpoint, path, "");
}

HttpResponse InProcessTransport::post(const std::string& endpoint, const std::string& path,
                                      const std::string& body) {
    return dispatch("POST", endpoint, path, body);
}

HttpResponse HttplibTransport::get(const std::string& endpoint, const std::string& path) {
    httplib::Client client(endpoint);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    auto res = client.Get(path);
    if (!res) return {0, "transport failure: " + to_string(res.error()) + " (" + endpoint + ")"};
    return {res->status, res->body};
}

HttpResponse HttplibTransport::post(const std::string& endpoint, const std::string& path,
                                    const std::string& body) {
    httplib::Client client(endpoint);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    auto res = client.Post(path, body, "application/json");
    if (!res) return {0, "transport failure: " + to_string(res.error()) + " (" + endpoint + ")"};
    return {res->status, res->body};
}

HttpResponse RecordingTransport::get(const std::string& endpoint, const std::string& path) {
    HttpResponse r = inner_.get(endpoint, path);
    std::lock_guard<std::mutex> lock(mu_);
    records_.push_back({"GET", endpoint, path, 0, r.body.size(), r.status});
    return r;
}

HttpResponse RecordingTransport::post(const std::string& endpoint, const std::string& path,
                                      const std::string& body) {
    HttpResponse r = inner_.post(endpoint, path, body);
    std::lock_guard<std::mutex> lock(mu_);
    records_.push_back({"POST", endpoint, path, body.size(), r.body.size(), r.status});
    return r;
}

std::vector<ExchangeRecord> RecordingTransport::records() const {
    std::lock_guard<std::mutex> lock(mu_);
    return records_;
}

void RecordingTransport::clear() {
    std::lock_guard<std::mutex> lock(mu_);
    records_.clear();
}

}  // namespace semfabric
