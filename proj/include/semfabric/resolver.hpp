#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "semfabric/embed.hpp"
#include "semfabric/source_server.hpp"
#include "semfabric/transport.hpp"
#include "semfabric/wire.hpp"

namespace semfabric {

struct Registration {
    SourceManifest manifest;
    EmbeddingVector source_vec;  // resolver's own embedding of manifest.summary_text
    std::string registered_at;
};

// Flat source registry: sources register manifests, agents resolve a query
// plus constraints to a ranked source list. The resolver embeds each source's
// summary text with its own embedder so heterogeneous sources never mix
// vector spaces.
class ResolverCore : public HttpHandler {
public:
    explicit ResolverCore(EmbedderSpec embedder = {}, ClockFn clock = system_clock_now);

    // Replaces any existing registration with the same source_id. Throws
    // ParamError listing invalid manifest fields.
    void register_manifest(const SourceManifest& manifest);

    struct Resolved {
        std::vector<SourceScore> results;
        int64_t filtered_out = 0;
    };
    Resolved resolve(const std::string& query, int64_t s, const Constraints& constraints) const;

    std::vector<Registration> list_sources() const;  // source_id order
    size_t size() const;

    HttpResponse handle(const std::string& method, const std::string& path,
                        const std::string& body) override;

    HttpResponse serve_register(const std::string& request_body);
    HttpResponse serve_resolve(const std::string& request_body) const;
    HttpResponse serve_sources() const;

    // Registry persistence as JSONL of {manifest, registered_at}; source
    // vectors are recomputed on load.
    void save_state(const std::filesystem::path& path) const;
    void load_state(const std::filesystem::path& path);

private:
    EmbedderSpec embedder_;
    ClockFn clock_;
    mutable std::shared_mutex mu_;
    std::vector<Registration> registry_;  // sorted by manifest.source_id
};

}  // namespace semfabric
