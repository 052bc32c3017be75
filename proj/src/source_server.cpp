#include "semfabric/source_server.hpp"

#include <algorithm>
#include <chrono>

#include "semfabric/util.hpp"

namespace semfabric {

using nlohmann::json;

int64_t system_clock_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

namespace {

std::string max_fetched_at(const std::vector<const Document*>& docs) {
    std::string latest = "1970-01-01T00:00:00Z";
    int64_t best = parse_iso8601(latest);
    for (const Document* d : docs) {
        try {
            int64_t t = parse_iso8601(d->fetched_at);
            if (t > best) {
                best = t;
                latest = d->fetched_at;
            }
        } catch (const ParamError&) {
            // unparseable timestamps don't advance the high-water mark
        }
    }
    return latest;
}

json details_json(const std::string& license, const std::vector<std::string>& topics,
                  const std::string& updated_at) {
    return json{{"license", license}, {"topics", topics}, {"updated_at", updated_at}};
}

VectorIndex build_index(const std::vector<const Document*>& docs, const SplitParams& params,
                        const EmbedderSpec& spec, const std::string& identity,
                        const std::string& title, const std::string& license,
                        const std::vector<std::string>& topics,
                        const std::map<std::string, json>& per_source) {
    VectorIndex index(spec);
    std::vector<Chunk> all;
    json uris = json::object();
    for (const Document* d : docs) {
        std::vector<Chunk> chunks = chunk_document(*d, params);
        all.insert(all.end(), std::make_move_iterator(chunks.begin()),
                   std::make_move_iterator(chunks.end()));
        uris[d->doc_id] = d->uri;
    }
    index.upsert(all);

    json extra = json::object();
    extra["source_id"] = identity;
    extra["title"] = title;
    extra["license"] = license;
    extra["topics"] = topics;
    extra["updated_at"] = max_fetched_at(docs);
    extra["doc_uris"] = uris;
    json details = json::object();
    for (const auto& [sid, d] : per_source) details[sid] = d;
    extra["source_details"] = details;
    index.set_extra(std::move(extra));
    return index;
}

}  // namespace

VectorIndex ingest_source(const std::vector<Document>& docs, const SplitParams& params,
                          const EmbedderSpec& spec, const SourceMeta* meta) {
    std::string source_id;
    std::vector<const Document*> ptrs;
    for (const Document& d : docs) {
        if (source_id.empty()) {
            source_id = d.source_id;
        } else if (d.source_id != source_id) {
            throw IngestError("mixed source_ids in ingest: \"" + source_id + "\" and \"" +
                              d.source_id + "\"");
        }
        ptrs.push_back(&d);
    }
    if (source_id.empty() && meta) source_id = meta->source_id;

    std::string title = meta ? meta->title : source_id;
    std::string license = meta ? meta->license : "proprietary";
    std::vector<std::string> topics = meta ? meta->topics : std::vector<std::string>{};
    std::map<std::string, json> per_source;
    per_source[source_id] = details_json(license, topics, max_fetched_at(ptrs));
    return build_index(ptrs, params, spec, source_id, title, license, topics, per_source);
}

VectorIndex ingest_central(const Corpus& corpus, const SplitParams& params,
                           const EmbedderSpec& spec) {
    std::vector<const Document*> ptrs;
    for (const Document& d : corpus.documents) ptrs.push_back(&d);

    std::map<std::string, json> per_source;
    std::map<std::string, std::vector<const Document*>> by_source;
    for (const Document& d : corpus.documents) by_source[d.source_id].push_back(&d);
    std::vector<std::string> all_topics;
    for (const auto& [sid, docs] : by_source) {
        const SourceMeta* meta = corpus.find_source_meta(sid);
        std::string license = meta ? meta->license : "proprietary";
        std::vector<std::string> topics = meta ? meta->topics : std::vector<std::string>{};
        per_source[sid] = details_json(license, topics, max_fetched_at(docs));
        for (const auto& t : topics) {
            if (std::find(all_topics.begin(), all_topics.end(), t) == all_topics.end()) {
                all_topics.push_back(t);
            }
        }
    }
    std::sort(all_topics.begin(), all_topics.end());
    return build_index(ptrs, params, spec, "central", "central", "mixed", all_topics, per_source);
}

SourceServerCore::SourceServerCore(std::string endpoint, ClockFn clock)
    : endpoint_(std::move(endpoint)), clock_(std::move(clock)) {}

SourceServerCore::SourceServerCore(VectorIndex index, std::string endpoint, ClockFn clock)
    : endpoint_(std::move(endpoint)), clock_(std::move(clock)) {
    load_index(std::move(index));
}

void SourceServerCore::load_index(VectorIndex index) {
    index_ = std::move(index);
    const json& extra = index_->extra();
    source_id_ = extra.value("source_id", std::string("unknown"));
    title_ = extra.value("title", source_id_);
    top_.license = extra.value("license", std::string("proprietary"));
    top_.updated_at = extra.value("updated_at", std::string("1970-01-01T00:00:00Z"));
    top_.topics.clear();
    if (extra.contains("topics")) {
        for (const auto& t : extra.at("topics")) top_.topics.push_back(t.get<std::string>());
    }
    per_source_.clear();
    if (extra.contains("source_details")) {
        for (const auto& [sid, d] : extra.at("source_details").items()) {
            ChunkMeta m;
            m.license = d.value("license", top_.license);
            m.updated_at = d.value("updated_at", top_.updated_at);
            if (d.contains("topics")) {
                for (const auto& t : d.at("topics")) m.topics.push_back(t.get<std::string>());
            }
            per_source_[sid] = std::move(m);
        }
    }
    doc_uris_.clear();
    if (extra.contains("doc_uris")) {
        for (const auto& [doc_id, uri] : extra.at("doc_uris").items()) {
            doc_uris_[doc_id] = uri.get<std::string>();
        }
    }
}

const SourceServerCore::ChunkMeta& SourceServerCore::details_for(
    const std::string& source_id) const {
    auto it = per_source_.find(source_id);
    return it != per_source_.end() ? it->second : top_;
}

SourceManifest SourceServerCore::manifest() const {
    if (!index_) throw StoreError("no index loaded");
    SourceManifest m;
    m.protocol_version = "1";
    m.source_id = source_id_;
    m.endpoint = endpoint_;
    m.title = title_;
    m.embedding_model_id = index_->embedder().model_id;
    m.license = top_.license;
    m.topics = top_.topics;
    m.chunk_count = static_cast<int64_t>(index_->size());
    m.summary_text = index_->summary_text();
    m.updated_at = top_.updated_at;
    return m;
}

HttpResponse SourceServerCore::serve_manifest() const {
    if (!index_) return {503, error_body("index not loaded")};
    return {200, manifest().to_json().dump()};
}

HttpResponse SourceServerCore::serve_query(const std::string& request_body) const {
    if (!index_) return {503, error_body("index not loaded")};
    json j = json::parse(request_body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return {400, error_body("request body is not a JSON object")};
    }
    if (!j.contains("query") || !j.at("query").is_string()) {
        return {400, error_body("missing required field: query")};
    }
    if (!j.contains("k") || !j.at("k").is_number_integer()) {
        return {400, error_body("missing required field: k")};
    }
    std::string query = j.at("query").get<std::string>();
    int64_t k = j.at("k").get<int64_t>();
    if (query.empty()) return {400, error_body("query must be non-empty")};
    if (k < 1 || k > kMaxQueryK) {
        return {400, error_body("k out of range [1, " + std::to_string(kMaxQueryK) + "]")};
    }
    Constraints constraints;
    if (j.contains("constraints") && j.at("constraints").is_object()) {
        constraints = Constraints::from_json(j.at("constraints"));
    }

    EmbeddingVector qv = embed(query, index_->embedder());
    int64_t now = clock_();
    auto accept = [&](const Chunk& c) {
        if (constraints.empty()) return true;
        const ChunkMeta& meta = details_for(c.source_id);
        SourceManifest probe;  // reuse the manifest-level matcher on chunk provenance
        probe.license = meta.license;
        probe.topics = meta.topics;
        probe.updated_at = meta.updated_at;
        return constraints_accept(constraints, probe, now);
    };
    std::vector<ScoredChunk> scored =
        index_->top_k_filtered(qv, static_cast<size_t>(k), accept);

    QueryResponse resp;
    resp.results.reserve(scored.size());
    for (const ScoredChunk& sc : scored) {
        WireChunk w;
        w.chunk_id = sc.chunk.chunk_id;
        w.doc_id = sc.chunk.doc_id;
        auto uri_it = doc_uris_.find(sc.chunk.doc_id);
        w.uri = uri_it != doc_uris_.end() ? uri_it->second : "";
        w.start = sc.chunk.start;
        w.end = sc.chunk.end;
        w.score = sc.score;
        w.text = sc.chunk.text;
        w.digest = sc.chunk.digest;
        const ChunkMeta& meta = details_for(sc.chunk.source_id);
        w.license = meta.license;
        w.updated_at = meta.updated_at;
        w.source_id = sc.chunk.source_id;
        resp.results.push_back(std::move(w));
    }
    return {200, resp.to_body()};
}

HttpResponse SourceServerCore::handle(const std::string& method, const std::string& path,
                                      const std::string& body) {
    if (method == "GET" && path == "/manifest") return serve_manifest();
    if (method == "POST" && path == "/query") return serve_query(body);
    return {404, error_body("no such endpoint: " + method + " " + path)};
}

}  // namespace semfabric
