#include "semfabric/wire.hpp"

#include <algorithm>

#include "semfabric/util.hpp"

namespace semfabric {

using nlohmann::json;

json Constraints::to_json() const {
    json j = json::object();
    if (licenses) j["licenses"] = *licenses;
    if (topics) j["topics"] = *topics;
    if (max_age_days) j["max_age_days"] = *max_age_days;
    if (media_types) j["media_types"] = *media_types;
    return j;
}

Constraints Constraints::from_json(const json& j) {
    Constraints c;
    if (j.contains("licenses") && j.at("licenses").is_array() && !j.at("licenses").empty()) {
        c.licenses = j.at("licenses").get<std::vector<std::string>>();
    }
    if (j.contains("topics") && j.at("topics").is_array() && !j.at("topics").empty()) {
        c.topics = j.at("topics").get<std::vector<std::string>>();
    }
    if (j.contains("max_age_days") && j.at("max_age_days").is_number()) {
        c.max_age_days = j.at("max_age_days").get<int64_t>();
    }
    if (j.contains("media_types") && j.at("media_types").is_array() &&
        !j.at("media_types").empty()) {
        c.media_types = j.at("media_types").get<std::vector<std::string>>();
    }
    return c;
}

json SourceManifest::to_json() const {
    return json{{"chunk_count", chunk_count},
                {"embedding_model_id", embedding_model_id},
                {"endpoint", endpoint},
                {"license", license},
                {"protocol_version", protocol_version},
                {"source_id", source_id},
                {"summary_text", summary_text},
                {"title", title},
                {"topics", topics},
                {"updated_at", updated_at}};
}

SourceManifest SourceManifest::from_json(const json& j) {
    SourceManifest m;
    m.protocol_version = j.value("protocol_version", std::string());
    m.source_id = j.value("source_id", std::string());
    m.endpoint = j.value("endpoint", std::string());
    m.title = j.value("title", std::string());
    m.embedding_model_id = j.value("embedding_model_id", std::string());
    m.license = j.value("license", std::string());
    if (j.contains("topics") && j.at("topics").is_array()) {
        m.topics = j.at("topics").get<std::vector<std::string>>();
    }
    m.chunk_count = j.value("chunk_count", static_cast<int64_t>(0));
    m.summary_text = j.value("summary_text", std::string());
    m.updated_at = j.value("updated_at", std::string());
    return m;
}

namespace {

bool valid_endpoint_url(const std::string& url) {
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) return false;
    size_t host_begin = url.find("//") + 2;
    return host_begin < url.size();
}

bool valid_timestamp(const std::string& ts) {
    try {
        parse_iso8601(ts);
        return true;
    } catch (const ParamError&) {
        return false;
    }
}

}  // namespace

std::vector<std::string> SourceManifest::invalid_fields() const {
    std::vector<std::string> bad;
    if (protocol_version != "1") bad.push_back("protocol_version");
    if (source_id.empty()) bad.push_back("source_id");
    if (!valid_endpoint_url(endpoint)) bad.push_back("endpoint");
    if (embedding_model_id.empty()) bad.push_back("embedding_model_id");
    if (license.empty()) bad.push_back("license");
    if (chunk_count < 0) bad.push_back("chunk_count");
    if (utf8_length(summary_text) > 4096) bad.push_back("summary_text");
    if (!valid_timestamp(updated_at)) bad.push_back("updated_at");
    return bad;
}

bool constraints_accept(const Constraints& c, const SourceManifest& m, int64_t now_epoch) {
    if (c.licenses) {
        if (std::find(c.licenses->begin(), c.licenses->end(), m.license) == c.licenses->end()) {
            return false;
        }
    }
    auto intersects = [&](const std::vector<std::string>& wanted) {
        for (const auto& w : wanted) {
            if (std::find(m.topics.begin(), m.topics.end(), w) != m.topics.end()) return true;
        }
        return false;
    };
    if (c.topics && !intersects(*c.topics)) return false;
    if (c.media_types && !intersects(*c.media_types)) return false;
    if (c.max_age_days) {
        int64_t updated;
        try {
            updated = parse_iso8601(m.updated_at);
        } catch (const ParamError&) {
            return false;
        }
        if (now_epoch - updated > *c.max_age_days * 86400) return false;
    }
    return true;
}

json QueryRequest::to_json() const {
    json j{{"k", k}, {"query", query}};
    if (constraints && !constraints->empty()) j["constraints"] = constraints->to_json();
    return j;
}

json WireChunk::to_json() const {
    return json{{"chunk_id", chunk_id}, {"digest", digest},   {"doc_id", doc_id},
                {"end", end},           {"license", license}, {"score", score},
                {"source_id", source_id}, {"start", start},   {"text", text},
                {"updated_at", updated_at}, {"uri", uri}};
}

WireChunk WireChunk::from_json(const json& j) {
    WireChunk c;
    c.chunk_id = j.value("chunk_id", std::string());
    c.digest = j.value("digest", std::string());
    c.doc_id = j.value("doc_id", std::string());
    c.end = j.value("end", static_cast<size_t>(0));
    c.license = j.value("license", std::string());
    c.score = j.value("score", 0.0);
    c.source_id = j.value("source_id", std::string());
    c.start = j.value("start", static_cast<size_t>(0));
    c.text = j.value("text", std::string());
    c.updated_at = j.value("updated_at", std::string());
    c.uri = j.value("uri", std::string());
    return c;
}

std::string QueryResponse::to_body() {
    json results_json = json::array();
    for (const WireChunk& r : results) results_json.push_back(r.to_json());
    // served_bytes counts the body that actually leaves the server, so its
    // own digits participate: iterate to the fixed point.
    int64_t guess = 0;
    for (int i = 0; i < 6; ++i) {
        json j{{"results", results_json}, {"served_bytes", guess}};
        int64_t actual = static_cast<int64_t>(j.dump().size());
        if (actual == guess) break;
        guess = actual;
    }
    served_bytes = guess;
    json j{{"results", results_json}, {"served_bytes", served_bytes}};
    return j.dump();
}

QueryResponse QueryResponse::from_body(const std::string& body) {
    json j = json::parse(body);
    QueryResponse r;
    r.served_bytes = j.value("served_bytes", static_cast<int64_t>(0));
    for (const auto& item : j.at("results")) r.results.push_back(WireChunk::from_json(item));
    return r;
}

json ResolveRequest::to_json() const {
    json j{{"query", query}, {"s", s}};
    if (constraints && !constraints->empty()) j["constraints"] = constraints->to_json();
    return j;
}

std::string ResolveResponse::to_body() const {
    json results_json = json::array();
    for (const SourceScore& r : results) {
        results_json.push_back(
            json{{"endpoint", r.endpoint}, {"score", r.score}, {"source_id", r.source_id}});
    }
    return json{{"filtered_out", filtered_out}, {"results", results_json}}.dump();
}

ResolveResponse ResolveResponse::from_body(const std::string& body) {
    json j = json::parse(body);
    ResolveResponse r;
    r.filtered_out = j.value("filtered_out", static_cast<int64_t>(0));
    for (const auto& item : j.at("results")) {
        SourceScore s;
        s.endpoint = item.value("endpoint", std::string());
        s.score = item.value("score", 0.0);
        s.source_id = item.value("source_id", std::string());
        r.results.push_back(std::move(s));
    }
    return r;
}

std::string error_body(const std::string& message) {
    return nlohmann::json{{"error", message}}.dump();
}

std::string error_body(const std::string& message, const std::vector<std::string>& fields) {
    return nlohmann::json{{"error", message}, {"fields", fields}}.dump();
}

}  // namespace semfabric
