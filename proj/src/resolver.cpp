#include "semfabric/resolver.hpp"

#include <algorithm>
#include <fstream>

#include "semfabric/util.hpp"

namespace semfabric {

using nlohmann::json;

ResolverCore::ResolverCore(EmbedderSpec embedder, ClockFn clock)
    : embedder_(std::move(embedder)), clock_(std::move(clock)) {}

void ResolverCore::register_manifest(const SourceManifest& manifest) {
    std::vector<std::string> bad = manifest.invalid_fields();
    if (!bad.empty()) {
        std::string msg = "invalid manifest fields:";
        for (const auto& f : bad) msg += " " + f;
        throw ParamError(msg);
    }
    Registration reg;
    reg.manifest = manifest;
    reg.source_vec = embed(manifest.summary_text, embedder_);
    reg.registered_at = format_iso8601(clock_());

    std::unique_lock lock(mu_);
    auto it = std::lower_bound(registry_.begin(), registry_.end(), manifest.source_id,
                               [](const Registration& r, const std::string& id) {
                                   return r.manifest.source_id < id;
                               });
    if (it != registry_.end() && it->manifest.source_id == manifest.source_id) {
        *it = std::move(reg);
    } else {
        registry_.insert(it, std::move(reg));
    }
}

ResolverCore::Resolved ResolverCore::resolve(const std::string& query, int64_t s,
                                             const Constraints& constraints) const {
    if (query.empty()) throw ParamError("empty query");
    if (s < 1) throw ParamError("s must be >= 1");

    EmbeddingVector qv = embed(query, embedder_);
    int64_t now = clock_();

    std::shared_lock lock(mu_);
    Resolved out;
    std::vector<const Registration*> survivors;
    for (const Registration& r : registry_) {
        if (constraints_accept(constraints, r.manifest, now)) {
            survivors.push_back(&r);
        } else {
            ++out.filtered_out;
        }
    }
    std::vector<SourceScore> scored;
    scored.reserve(survivors.size());
    for (const Registration* r : survivors) {
        scored.push_back(
            {r->manifest.source_id, r->manifest.endpoint, cosine(qv, r->source_vec)});
    }
    std::sort(scored.begin(), scored.end(), [](const SourceScore& a, const SourceScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.source_id < b.source_id;
    });
    if (static_cast<size_t>(s) < scored.size()) scored.resize(static_cast<size_t>(s));
    out.results = std::move(scored);
    return out;
}

std::vector<Registration> ResolverCore::list_sources() const {
    std::shared_lock lock(mu_);
    return registry_;
}

size_t ResolverCore::size() const {
    std::shared_lock lock(mu_);
    return registry_.size();
}

HttpResponse ResolverCore::serve_register(const std::string& request_body) {
    json j = json::parse(request_body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return {400, error_body("request body is not a JSON object")};
    }
    SourceManifest m = SourceManifest::from_json(j);
    std::vector<std::string> bad = m.invalid_fields();
    if (!bad.empty()) {
        return {400, error_body("invalid manifest", bad)};
    }
    register_manifest(m);
    return {200, json{{"registered", m.source_id}, {"registry_size", size()}}.dump()};
}

HttpResponse ResolverCore::serve_resolve(const std::string& request_body) const {
    json j = json::parse(request_body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return {400, error_body("request body is not a JSON object")};
    }
    if (!j.contains("query") || !j.at("query").is_string()) {
        return {400, error_body("missing required field: query")};
    }
    std::string query = j.at("query").get<std::string>();
    if (query.empty()) return {400, error_body("query must be non-empty")};
    int64_t s = j.contains("s") && j.at("s").is_number_integer() ? j.at("s").get<int64_t>() : 0;
    if (s < 1) return {400, error_body("s must be >= 1")};
    Constraints constraints;
    if (j.contains("constraints") && j.at("constraints").is_object()) {
        constraints = Constraints::from_json(j.at("constraints"));
    }
    Resolved r = resolve(query, s, constraints);
    ResolveResponse resp;
    resp.results = std::move(r.results);
    resp.filtered_out = r.filtered_out;
    return {200, resp.to_body()};
}

HttpResponse ResolverCore::serve_sources() const {
    json arr = json::array();
    for (const Registration& r : list_sources()) {
        arr.push_back(json{{"manifest", r.manifest.to_json()}, {"registered_at", r.registered_at}});
    }
    return {200, json{{"sources", arr}}.dump()};
}

HttpResponse ResolverCore::handle(const std::string& method, const std::string& path,
                                  const std::string& body) {
    if (method == "POST" && path == "/register") return serve_register(body);
    if (method == "POST" && path == "/resolve") return serve_resolve(body);
    if (method == "GET" && path == "/sources") return serve_sources();
    return {404, error_body("no such endpoint: " + method + " " + path)};
}

void ResolverCore::save_state(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write resolver state: " + path.string());
    for (const Registration& r : list_sources()) {
        out << json{{"manifest", r.manifest.to_json()}, {"registered_at", r.registered_at}}.dump()
            << "\n";
    }
}

void ResolverCore::load_state(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot open resolver state: " + path.string());
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("manifest")) {
            throw StoreError("corrupt resolver state at line " + std::to_string(line_no));
        }
        SourceManifest m = SourceManifest::from_json(j.at("manifest"));
        register_manifest(m);
        if (j.contains("registered_at")) {
            std::unique_lock lock(mu_);
            for (Registration& r : registry_) {
                if (r.manifest.source_id == m.source_id) {
                    r.registered_at = j.at("registered_at").get<std::string>();
                }
            }
        }
    }
}

}  // namespace semfabric
