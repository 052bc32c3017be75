#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semfabric/corpus.hpp"

namespace semfabric {

// A contiguous character span of one document. Offsets count Unicode code
// points, text is the exact UTF-8 slice, digest is FNV-1a64 of the slice in
// lowercase hex.
struct Chunk {
    std::string chunk_id;   // "<doc_id>#<start>-<end>"
    std::string doc_id;
    std::string source_id;
    size_t start = 0;       // inclusive, code points
    size_t end = 0;         // exclusive
    std::string text;
    std::string digest;
};

struct SplitParams {
    size_t chunk_size = 1000;
    size_t overlap = 100;
    std::vector<std::string> separators = {"\n\n", "\n", " ", ""};
};

struct Span {
    size_t start = 0;
    size_t end = 0;
    bool operator==(const Span&) const = default;
};

// Splits text into spans of at most chunk_size code points.
//
// The split is recursive: the first separator present in the text partitions
// it (separator characters stay with the preceding piece); oversized pieces
// are re-split with the remaining separators; the empty separator is a
// sliding window of chunk_size stepping by chunk_size - overlap whose final
// window is right-aligned to the piece end. Pieces are then merged greedily
// left to right while the running span stays within chunk_size; a span closed
// by overflow hands `overlap` trailing characters to its successor (clamped
// so starts stay strictly increasing and spans stay within chunk_size).
//
// Guarantees: spans cover every character, starts strictly increase, each
// span is at most chunk_size long, and the same input always produces the
// same spans.
std::vector<Span> split_recursive(std::string_view text, const SplitParams& params);

std::string make_chunk_id(const std::string& doc_id, size_t start, size_t end);

std::vector<Chunk> chunk_document(const Document& doc, const SplitParams& params);

}  // namespace semfabric
