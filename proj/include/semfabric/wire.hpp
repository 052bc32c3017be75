#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace semfabric {

// Retrieval scoping constraints (license allow-list, topic intersection,
// recency, media tags). Lists are present-and-non-empty or absent.
struct Constraints {
    std::optional<std::vector<std::string>> licenses;
    std::optional<std::vector<std::string>> topics;
    std::optional<int64_t> max_age_days;
    std::optional<std::vector<std::string>> media_types;

    bool empty() const {
        return !licenses && !topics && !max_age_days && !media_types;
    }

    nlohmann::json to_json() const;
    static Constraints from_json(const nlohmann::json& j);
};

// A source's self-description used for discovery and registration.
struct SourceManifest {
    std::string protocol_version = "1";
    std::string source_id;
    std::string endpoint;
    std::string title;
    std::string embedding_model_id;
    std::string license = "proprietary";
    std::vector<std::string> topics;
    int64_t chunk_count = 0;
    std::string summary_text;
    std::string updated_at;  // ISO-8601 UTC

    nlohmann::json to_json() const;
    static SourceManifest from_json(const nlohmann::json& j);

    // Field names that fail validation; empty means valid.
    std::vector<std::string> invalid_fields() const;
};

// True when the manifest satisfies every supplied constraint. Media-type
// constraints match against topic tags (the manifest carries no separate
// media field). now_epoch anchors the max_age_days check.
bool constraints_accept(const Constraints& c, const SourceManifest& m, int64_t now_epoch);

struct QueryRequest {
    std::string query;
    int64_t k = 0;
    std::optional<Constraints> constraints;

    nlohmann::json to_json() const;
};

// One scored chunk on the wire, with provenance.
struct WireChunk {
    std::string chunk_id;
    std::string doc_id;
    std::string uri;
    size_t start = 0;
    size_t end = 0;
    double score = 0.0;
    std::string text;
    std::string digest;
    std::string license;
    std::string updated_at;
    std::string source_id;

    nlohmann::json to_json() const;
    static WireChunk from_json(const nlohmann::json& j);
};

struct QueryResponse {
    std::vector<WireChunk> results;
    int64_t served_bytes = 0;

    // Serializes with served_bytes equal to the byte length of the emitted
    // body (fixed point over the digit width).
    std::string to_body();
    static QueryResponse from_body(const std::string& body);
};

struct SourceScore {
    std::string source_id;
    std::string endpoint;
    double score = 0.0;
};

struct ResolveRequest {
    std::string query;
    int64_t s = 0;
    std::optional<Constraints> constraints;

    nlohmann::json to_json() const;
};

struct ResolveResponse {
    std::vector<SourceScore> results;
    int64_t filtered_out = 0;

    std::string to_body() const;
    static ResolveResponse from_body(const std::string& body);
};

std::string error_body(const std::string& message);
std::string error_body(const std::string& message, const std::vector<std::string>& fields);

}  // namespace semfabric
