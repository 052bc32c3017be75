#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semfabric/chunker.hpp"
#include "semfabric/embed.hpp"

namespace semfabric {

struct IndexEntry {
    Chunk chunk;
    EmbeddingVector vector;
};

struct ScoredChunk {
    Chunk chunk;
    double score = 0.0;
    size_t payload_bytes = 0;  // UTF-8 byte length of chunk.text
};

// Exact-scan vector index over chunks. Entries are kept in chunk_id order so
// that serialization, iteration and tie-breaking are canonical.
class VectorIndex {
public:
    VectorIndex() = default;
    explicit VectorIndex(EmbedderSpec embedder) : embedder_(std::move(embedder)) {}

    const EmbedderSpec& embedder() const { return embedder_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    const std::string& summary_text() const { return summary_; }
    size_t size() const { return entries_.size(); }

    // Extra header fields carried through persistence (source metadata,
    // document URIs). Opaque to the index itself.
    const nlohmann::json& extra() const { return extra_; }
    void set_extra(nlohmann::json extra) { extra_ = std::move(extra); }

    // Embeds and inserts chunks; an existing chunk_id is replaced. Refreshes
    // summary_text: first 4096 characters of the concatenation of each
    // document's first chunk, in doc_id order.
    void upsert(const std::vector<Chunk>& chunks);

    // The k highest-cosine entries, sorted by (score desc, chunk_id asc);
    // ties broken by ascending chunk_id. Throws ComparisonError when the
    // query vector's model does not match the index embedder.
    std::vector<ScoredChunk> top_k(const EmbeddingVector& query_vec, size_t k) const;

    // Same, restricted to entries the predicate accepts.
    template <typename Pred>
    std::vector<ScoredChunk> top_k_filtered(const EmbeddingVector& query_vec, size_t k,
                                            Pred pred) const;

    void persist(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

    // FNV-1a64 hex of the canonical serialized form.
    std::string digest() const;
    std::string serialize() const;

private:
    void refresh_summary();
    std::vector<ScoredChunk> scan(const EmbeddingVector& query_vec, size_t k,
                                  const std::vector<size_t>& candidates) const;

    EmbedderSpec embedder_;
    std::vector<IndexEntry> entries_;  // sorted by chunk.chunk_id
    std::string summary_;
    nlohmann::json extra_ = nlohmann::json::object();
};

template <typename Pred>
std::vector<ScoredChunk> VectorIndex::top_k_filtered(const EmbeddingVector& query_vec, size_t k,
                                                     Pred pred) const {
    std::vector<size_t> candidates;
    candidates.reserve(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (pred(entries_[i].chunk)) candidates.push_back(i);
    }
    return scan(query_vec, k, candidates);
}

}  // namespace semfabric
