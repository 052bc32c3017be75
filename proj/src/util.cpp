#include "semfabric/util.hpp"

#include <array>
#include <cstdio>
#include <ctime>

namespace semfabric {

std::string fnv1a64_hex(std::string_view bytes) {
    uint64_t h = fnv1a64(bytes);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

namespace {

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD

// Decodes one code point starting at `i`. Returns the number of bytes
// consumed and writes the code point; returns 0 when the sequence is invalid
// (caller consumes exactly one byte in that case).
size_t decode_one(std::string_view s, size_t i, char32_t& cp) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    auto cont = [&](size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0) {
        if (!cont(1)) return 0;
        cp = (static_cast<char32_t>(b0 & 0x1F) << 6) |
             (static_cast<unsigned char>(s[i + 1]) & 0x3F);
        if (cp < 0x80) return 0;  // overlong
        return 2;
    }
    if ((b0 & 0xF0) == 0xE0) {
        if (!cont(1) || !cont(2)) return 0;
        cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
             ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3F)) << 6) |
             (static_cast<unsigned char>(s[i + 2]) & 0x3F);
        if (cp < 0x800) return 0;
        if (cp >= 0xD800 && cp <= 0xDFFF) return 0;  // surrogates are invalid in UTF-8
        return 3;
    }
    if ((b0 & 0xF8) == 0xF0) {
        if (!cont(1) || !cont(2) || !cont(3)) return 0;
        cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
             ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3F)) << 12) |
             ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 2]) & 0x3F)) << 6) |
             (static_cast<unsigned char>(s[i + 3]) & 0x3F);
        if (cp < 0x10000 || cp > 0x10FFFF) return 0;
        return 4;
    }
    return 0;
}

}  // namespace

std::string repair_utf8(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    size_t i = 0;
    while (i < raw.size()) {
        char32_t cp = 0;
        size_t n = decode_one(raw, i, cp);
        if (n == 0) {
            out.append(kReplacement);
            i += 1;
        } else {
            out.append(raw.substr(i, n));
            i += n;
        }
    }
    return out;
}

Utf8View decode_utf8(std::string_view text) {
    Utf8View v;
    v.points.reserve(text.size());
    v.cp_byte_offsets.reserve(text.size() + 1);
    size_t i = 0;
    while (i < text.size()) {
        v.cp_byte_offsets.push_back(i);
        char32_t cp = 0;
        size_t n = decode_one(text, i, cp);
        if (n == 0) {
            v.points.push_back(0xFFFD);
            i += 1;
        } else {
            v.points.push_back(cp);
            i += n;
        }
    }
    v.cp_byte_offsets.push_back(text.size());
    return v;
}

size_t utf8_length(std::string_view text) {
    size_t count = 0;
    size_t i = 0;
    while (i < text.size()) {
        char32_t cp = 0;
        size_t n = decode_one(text, i, cp);
        i += (n == 0) ? 1 : n;
        ++count;
    }
    return count;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_lower(c);
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && ascii_space(s[b])) ++b;
    while (e > b && ascii_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_run = false;
    for (char c : s) {
        if (ascii_space(c)) {
            in_run = true;
        } else {
            if (in_run && !out.empty()) out.push_back(' ');
            in_run = false;
            out.push_back(c);
        }
    }
    return out;
}

bool starts_with_nocase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        if (ascii_lower(s[i]) != ascii_lower(prefix[i])) return false;
    }
    return true;
}

int64_t parse_iso8601(const std::string& ts) {
    std::tm tm = {};
    int y, mo, d, h, mi, s;
    if (std::sscanf(ts.c_str(), "%d-%d-%dT%d:%d:%dZ", &y, &mo, &d, &h, &mi, &s) != 6) {
        throw ParamError("malformed ISO-8601 timestamp: " + ts);
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 60) {
        throw ParamError("out-of-range ISO-8601 timestamp: " + ts);
    }
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return static_cast<int64_t>(timegm(&tm));
}

std::string format_iso8601(int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm = {};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return std::string(buf);
}

}  // namespace semfabric
