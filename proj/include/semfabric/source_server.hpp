#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "semfabric/corpus.hpp"
#include "semfabric/store.hpp"
#include "semfabric/transport.hpp"
#include "semfabric/wire.hpp"

namespace semfabric {

using ClockFn = std::function<int64_t()>;
int64_t system_clock_now();

// Per-source provenance attached to an index at ingest time and echoed on
// every served chunk.
struct SourceDetails {
    std::string title;
    std::string license = "proprietary";
    std::vector<std::string> topics;
    std::string updated_at;  // max fetched_at of the source's documents
};

// Builds the index for a single source. All documents must share source_id.
VectorIndex ingest_source(const std::vector<Document>& docs, const SplitParams& params,
                          const EmbedderSpec& spec, const SourceMeta* meta);

// Builds one index over every document in the corpus. Chunks keep their
// original source_id so provenance and constraint filtering still work.
VectorIndex ingest_central(const Corpus& corpus, const SplitParams& params,
                           const EmbedderSpec& spec);

// The query half of an AI-native web source: GET /manifest and POST /query
// over a read-only index. Ingestion happens offline; a core without an index
// answers 503.
class SourceServerCore : public HttpHandler {
public:
    SourceServerCore(std::string endpoint, ClockFn clock = system_clock_now);
    SourceServerCore(VectorIndex index, std::string endpoint, ClockFn clock = system_clock_now);

    void load_index(VectorIndex index);
    bool has_index() const { return index_.has_value(); }
    const VectorIndex* index() const { return index_ ? &*index_ : nullptr; }

    SourceManifest manifest() const;  // throws StoreError when no index is loaded

    // Body + status for each endpoint; the HTTP layer is a thin shim over
    // these so in-process and on-the-wire bodies are identical bytes.
    HttpResponse handle(const std::string& method, const std::string& path,
                        const std::string& body) override;

    HttpResponse serve_manifest() const;
    HttpResponse serve_query(const std::string& request_body) const;

private:
    struct ChunkMeta {
        std::string license;
        std::vector<std::string> topics;
        std::string updated_at;
    };
    const ChunkMeta& details_for(const std::string& source_id) const;

    std::optional<VectorIndex> index_;
    std::string endpoint_;
    ClockFn clock_;

    // Decoded from the index extra header.
    std::string source_id_;
    std::string title_;
    ChunkMeta top_;
    std::map<std::string, ChunkMeta> per_source_;
    std::map<std::string, std::string> doc_uris_;
};

constexpr int64_t kMaxQueryK = 1000;

}  // namespace semfabric
