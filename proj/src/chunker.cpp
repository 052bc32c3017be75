#include "semfabric/chunker.hpp"

#include <algorithm>

#include "semfabric/util.hpp"

namespace semfabric {

namespace {

struct Piece {
    size_t start;
    size_t end;
    bool window;  // produced by the sliding window; passes through the merge untouched
};

void validate(const SplitParams& params) {
    if (params.chunk_size == 0) throw ParamError("chunk_size must be positive");
    if (params.overlap >= params.chunk_size) {
        throw ParamError("overlap (" + std::to_string(params.overlap) +
                         ") must be smaller than chunk_size (" +
                         std::to_string(params.chunk_size) + ")");
    }
    if (params.separators.empty() || !params.separators.back().empty()) {
        throw ParamError("separator list must end with the empty string");
    }
}

// Sliding window over [start, end), end - start > chunk_size. Full windows
// step by chunk_size - overlap; the last one is right-aligned to end at the
// piece end, clamped to keep starts strictly increasing.
void emit_windows(size_t start, size_t end, const SplitParams& p, std::vector<Piece>& out) {
    size_t step = p.chunk_size - p.overlap;
    size_t s = start;
    size_t prev_start = 0;
    bool any = false;
    while (s + p.chunk_size < end) {
        out.push_back({s, s + p.chunk_size, true});
        prev_start = s;
        any = true;
        s += step;
    }
    size_t final_start = end - p.chunk_size;
    if (any) final_start = std::max(final_start, prev_start + 1);
    out.push_back({final_start, end, true});
}

// First occurrence of sep fully inside text[from, to), or npos.
size_t find_in(const std::u32string& text, size_t from, size_t to, const std::u32string& sep) {
    size_t hit = text.find(sep, from);
    if (hit == std::u32string::npos || hit + sep.size() > to) return std::u32string::npos;
    return hit;
}

void collect(const std::u32string& text, size_t start, size_t end,
             const std::vector<std::u32string>& seps, size_t sep_index, const SplitParams& p,
             std::vector<Piece>& out) {
    if (end - start <= p.chunk_size) {
        out.push_back({start, end, false});
        return;
    }
    // First separator from sep_index on that occurs in this range; the list
    // ends with the empty separator, which means the sliding window.
    size_t idx = sep_index;
    while (idx < seps.size() && !seps[idx].empty() &&
           find_in(text, start, end, seps[idx]) == std::u32string::npos) {
        ++idx;
    }
    if (idx >= seps.size() || seps[idx].empty()) {
        emit_windows(start, end, p, out);
        return;
    }
    const std::u32string& sep = seps[idx];
    // Partition at every occurrence; separator characters belong to the
    // preceding piece, so cut points sit just after each occurrence.
    size_t piece_start = start;
    size_t pos = start;
    auto emit_piece = [&](size_t cut) {
        if (cut == piece_start) return;  // separator at piece boundary: nothing before it
        if (cut - piece_start > p.chunk_size) {
            collect(text, piece_start, cut, seps, idx + 1, p, out);
        } else {
            out.push_back({piece_start, cut, false});
        }
        piece_start = cut;
    };
    while (true) {
        size_t hit = find_in(text, pos, end, sep);
        if (hit == std::u32string::npos) break;
        emit_piece(hit + sep.size());
        pos = hit + sep.size();
    }
    emit_piece(end);
}

std::vector<Span> merge(const std::vector<Piece>& pieces, const SplitParams& p) {
    std::vector<Span> spans;
    bool open = false;
    Span cur{};
    auto flush = [&] {
        if (open) {
            spans.push_back(cur);
            open = false;
        }
    };
    for (const Piece& piece : pieces) {
        if (piece.window) {
            flush();
            spans.push_back({piece.start, piece.end});
            continue;
        }
        if (!open) {
            cur = {piece.start, piece.end};
            open = true;
            continue;
        }
        if (piece.end - cur.start <= p.chunk_size) {
            cur.end = piece.end;
            continue;
        }
        // Overflow: close and carry `overlap` characters back into the new
        // span, clamped so starts stay strictly increasing and the incoming
        // piece still fits within chunk_size.
        spans.push_back(cur);
        size_t new_start = (cur.end > p.overlap) ? cur.end - p.overlap : 0;
        new_start = std::max(new_start, cur.start + 1);
        if (piece.end > p.chunk_size) new_start = std::max(new_start, piece.end - p.chunk_size);
        cur = {new_start, piece.end};
    }
    flush();
    return spans;
}

}  // namespace

std::vector<Span> split_recursive(std::string_view text, const SplitParams& params) {
    validate(params);
    Utf8View view = decode_utf8(text);
    size_t len = view.size();
    if (len == 0) return {};
    if (len <= params.chunk_size) return {{0, len}};

    std::vector<std::u32string> seps;
    seps.reserve(params.separators.size());
    for (const std::string& s : params.separators) seps.push_back(decode_utf8(s).points);

    std::vector<Piece> pieces;
    collect(view.points, 0, len, seps, 0, params, pieces);
    return merge(pieces, params);
}

std::string make_chunk_id(const std::string& doc_id, size_t start, size_t end) {
    return doc_id + "#" + std::to_string(start) + "-" + std::to_string(end);
}

std::vector<Chunk> chunk_document(const Document& doc, const SplitParams& params) {
    Utf8View view = decode_utf8(doc.text);
    std::vector<Span> spans = split_recursive(doc.text, params);
    std::vector<Chunk> chunks;
    chunks.reserve(spans.size());
    for (const Span& s : spans) {
        Chunk c;
        c.doc_id = doc.doc_id;
        c.source_id = doc.source_id;
        c.start = s.start;
        c.end = s.end;
        c.chunk_id = make_chunk_id(doc.doc_id, s.start, s.end);
        c.text = std::string(view.slice(doc.text, s.start, s.end));
        c.digest = fnv1a64_hex(c.text);
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace semfabric
