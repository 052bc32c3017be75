#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semfabric {

// Base class for all fatal errors raised by the library. Individual modules
// throw the derived types below so callers can distinguish load problems from
// protocol or parameter problems.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class CorpusError : public Error {
public:
    using Error::Error;
};

class ParamError : public Error {
public:
    using Error::Error;
};

// Raised when two vectors from different embedders are compared.
class ComparisonError : public Error {
public:
    using Error::Error;
};

class StoreError : public Error {
public:
    using Error::Error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

class RetrievalError : public Error {
public:
    using Error::Error;
};

class ReportError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// FNV-1a
// ---------------------------------------------------------------------------

constexpr uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

constexpr uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = kFnvOffsetBasis;
    for (unsigned char c : bytes) {
        h ^= static_cast<uint64_t>(c);
        h *= kFnvPrime;
    }
    return h;
}

// 16 lowercase hex chars.
std::string fnv1a64_hex(std::string_view bytes);

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

// Replaces invalid UTF-8 sequences with U+FFFD. Valid input passes through
// unchanged.
std::string repair_utf8(std::string_view raw);

// Decoded view of a UTF-8 string: code points plus the byte offset where each
// code point starts. cp_byte_offsets.size() == code point count + 1; the last
// entry is the byte length. Invalid bytes are treated as one code point each
// so byte slicing by code-point index is always exact.
struct Utf8View {
    std::u32string points;
    std::vector<size_t> cp_byte_offsets;

    size_t size() const { return points.size(); }
    // Byte slice of the original string covering code points [from, to).
    std::string_view slice(std::string_view original, size_t from, size_t to) const {
        return original.substr(cp_byte_offsets[from], cp_byte_offsets[to] - cp_byte_offsets[from]);
    }
};

Utf8View decode_utf8(std::string_view text);

// Number of code points (invalid bytes count as one each).
size_t utf8_length(std::string_view text);

// ---------------------------------------------------------------------------
// ASCII text helpers
// ---------------------------------------------------------------------------

inline bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
// Every maximal whitespace run becomes one space; leading/trailing runs dropped.
std::string collapse_whitespace(std::string_view s);

bool starts_with_nocase(std::string_view s, std::string_view prefix);

// ---------------------------------------------------------------------------
// ISO-8601 UTC timestamps ("YYYY-MM-DDTHH:MM:SSZ")
// ---------------------------------------------------------------------------

// Seconds since epoch; throws ParamError on malformed input.
int64_t parse_iso8601(const std::string& ts);
std::string format_iso8601(int64_t epoch_seconds);

}  // namespace semfabric
