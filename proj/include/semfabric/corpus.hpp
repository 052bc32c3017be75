#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace semfabric {

enum class MediaType { plain, markdown, html };

MediaType media_type_from_string(const std::string& s);
std::string media_type_to_string(MediaType t);

struct Document {
    std::string doc_id;
    std::string source_id;
    std::string uri;
    MediaType media_type = MediaType::plain;
    std::string text;          // normalized
    int64_t raw_bytes_len = 0; // on-disk size of the original file
    std::string fetched_at;    // ISO-8601 UTC
};

struct QaItem {
    std::string qid;
    std::string question;
    std::vector<std::string> answer_aliases;  // non-empty
    std::vector<std::string> source_rank;     // doc_ids in search-rank order
};

// Optional per-source metadata sitting next to the corpus (sources_meta.jsonl).
// The corpus proper only knows per-document records; licenses and topics are
// declared per source for manifest construction.
struct SourceMeta {
    std::string source_id;
    std::string title;
    std::string license = "proprietary";
    std::vector<std::string> topics;
};

struct Corpus {
    std::vector<Document> documents;  // sorted by doc_id
    std::vector<QaItem> questions;    // sorted by qid
    std::vector<SourceMeta> source_meta;  // sorted by source_id; may be empty

    const Document* find_document(const std::string& doc_id) const;
    const SourceMeta* find_source_meta(const std::string& source_id) const;
    std::vector<std::string> source_ids() const;  // distinct, sorted
};

// Normalizes raw file content to plain text. Total: invalid UTF-8 is repaired,
// never rejected. plain/markdown only get line endings normalized to "\n";
// html additionally has tags stripped (script/style dropped with content,
// block-level boundaries become "\n\n", entities for amp/lt/gt/quot/apos/nbsp
// decoded) and the result trimmed.
std::string normalize_document(std::string_view raw, MediaType media_type);

// Loads `sources.jsonl`, `questions.jsonl`, `docs/` and the optional
// `sources_meta.jsonl` from a corpus directory. Throws CorpusError naming the
// offending file / line / id on any structural problem.
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace semfabric
