#include "semfabric/store.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "semfabric/util.hpp"

namespace semfabric {

using nlohmann::json;

namespace {

constexpr int kIndexVersion = 1;

bool entry_id_less(const IndexEntry& e, const std::string& id) {
    return e.chunk.chunk_id < id;
}

json chunk_to_json(const Chunk& c) {
    return json{{"chunk_id", c.chunk_id}, {"digest", c.digest}, {"doc_id", c.doc_id},
                {"end", c.end},           {"source_id", c.source_id}, {"start", c.start},
                {"text", c.text}};
}

Chunk chunk_from_json(const json& j) {
    Chunk c;
    c.chunk_id = j.at("chunk_id").get<std::string>();
    c.digest = j.at("digest").get<std::string>();
    c.doc_id = j.at("doc_id").get<std::string>();
    c.end = j.at("end").get<size_t>();
    c.source_id = j.at("source_id").get<std::string>();
    c.start = j.at("start").get<size_t>();
    c.text = j.at("text").get<std::string>();
    return c;
}

}  // namespace

void VectorIndex::upsert(const std::vector<Chunk>& chunks) {
    for (const Chunk& c : chunks) {
        IndexEntry entry{c, embed(c.text, embedder_)};
        auto it = std::lower_bound(entries_.begin(), entries_.end(), c.chunk_id, entry_id_less);
        if (it != entries_.end() && it->chunk.chunk_id == c.chunk_id) {
            *it = std::move(entry);
        } else {
            entries_.insert(it, std::move(entry));
        }
    }
    refresh_summary();
}

void VectorIndex::refresh_summary() {
    // First chunk (numerically smallest start) of each document, doc_id order.
    std::map<std::string, const Chunk*> firsts;
    for (const IndexEntry& e : entries_) {
        auto [it, inserted] = firsts.try_emplace(e.chunk.doc_id, &e.chunk);
        if (!inserted && e.chunk.start < it->second->start) it->second = &e.chunk;
    }
    std::string concat;
    for (const auto& [doc_id, chunk] : firsts) {
        concat += chunk->text;
        if (utf8_length(concat) >= 4096) break;
    }
    Utf8View view = decode_utf8(concat);
    size_t keep = std::min<size_t>(view.size(), 4096);
    summary_ = std::string(view.slice(concat, 0, keep));
}

std::vector<ScoredChunk> VectorIndex::scan(const EmbeddingVector& query_vec, size_t k,
                                           const std::vector<size_t>& candidates) const {
    std::vector<ScoredChunk> out;
    if (k == 0 || candidates.empty()) return out;
    if (!entries_.empty() && (query_vec.model_id != embedder_.model_id)) {
        throw ComparisonError("query embedding model \"" + query_vec.model_id +
                              "\" does not match index model \"" + embedder_.model_id + "\"");
    }

    // Min-heap holding the current best k; worst candidate on top.
    struct Node {
        double score;
        size_t idx;
    };
    auto worse = [this](const Node& a, const Node& b) {
        if (a.score != b.score) return a.score < b.score;
        return entries_[a.idx].chunk.chunk_id > entries_[b.idx].chunk.chunk_id;
    };
    // Heap top = worst of the kept k.
    auto cmp = [&](const Node& a, const Node& b) { return worse(b, a); };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);

    for (size_t idx : candidates) {
        double s = cosine(query_vec, entries_[idx].vector);
        Node n{s, idx};
        if (heap.size() < k) {
            heap.push(n);
        } else if (worse(heap.top(), n)) {
            heap.pop();
            heap.push(n);
        }
    }
    out.reserve(heap.size());
    while (!heap.empty()) {
        const Node& n = heap.top();
        const Chunk& c = entries_[n.idx].chunk;
        out.push_back({c, n.score, c.text.size()});
        heap.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<ScoredChunk> VectorIndex::top_k(const EmbeddingVector& query_vec, size_t k) const {
    std::vector<size_t> all(entries_.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return scan(query_vec, k, all);
}

std::string VectorIndex::serialize() const {
    json header = extra_.is_object() ? extra_ : json::object();
    header["version"] = kIndexVersion;
    header["model_id"] = embedder_.model_id;
    header["dim"] = embedder_.dim;
    header["summary_text"] = summary_;
    std::ostringstream out;
    out << header.dump() << "\n";
    for (const IndexEntry& e : entries_) {
        json line{{"chunk", chunk_to_json(e.chunk)}, {"vector", e.vector.values}};
        out << line.dump() << "\n";
    }
    return out.str();
}

std::string VectorIndex::digest() const {
    return fnv1a64_hex(serialize());
}

void VectorIndex::persist(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write index file: " + path.string());
    out << serialize();
    if (!out) throw StoreError("failed writing index file: " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot open index file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw StoreError("corrupt index file (empty): " + path.string());
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.is_object()) {
        throw StoreError("corrupt index file (bad header): " + path.string());
    }
    if (!header.contains("version") || header.at("version").get<int>() != kIndexVersion) {
        throw StoreError("index version mismatch in " + path.string() + " (want " +
                         std::to_string(kIndexVersion) + ")");
    }
    EmbedderSpec spec;
    spec.model_id = header.at("model_id").get<std::string>();
    spec.dim = header.at("dim").get<size_t>();
    VectorIndex index(spec);
    index.summary_ = header.at("summary_text").get<std::string>();
    header.erase("version");
    header.erase("model_id");
    header.erase("dim");
    header.erase("summary_text");
    index.extra_ = std::move(header);

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("chunk") || !j.contains("vector")) {
            throw StoreError("corrupt index file (line " + std::to_string(line_no) + "): " +
                             path.string());
        }
        IndexEntry e;
        e.chunk = chunk_from_json(j.at("chunk"));
        e.vector.model_id = spec.model_id;
        e.vector.dim = spec.dim;
        e.vector.values = j.at("vector").get<std::vector<float>>();
        if (e.vector.values.size() != spec.dim) {
            throw StoreError("corrupt index file (vector dim mismatch at line " +
                             std::to_string(line_no) + "): " + path.string());
        }
        if (!index.entries_.empty() && !(index.entries_.back().chunk.chunk_id < e.chunk.chunk_id)) {
            throw StoreError("corrupt index file (entries out of order at line " +
                             std::to_string(line_no) + "): " + path.string());
        }
        index.entries_.push_back(std::move(e));
    }
    return index;
}

}  // namespace semfabric
