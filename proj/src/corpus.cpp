#include "semfabric/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semfabric/util.hpp"

namespace semfabric {

using nlohmann::json;

MediaType media_type_from_string(const std::string& s) {
    if (s == "plain") return MediaType::plain;
    if (s == "markdown") return MediaType::markdown;
    if (s == "html") return MediaType::html;
    throw CorpusError("unknown media_type: " + s);
}

std::string media_type_to_string(MediaType t) {
    switch (t) {
        case MediaType::plain: return "plain";
        case MediaType::markdown: return "markdown";
        case MediaType::html: return "html";
    }
    return "plain";
}

namespace {

std::string normalize_line_endings(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

bool is_block_tag(const std::string& name) {
    static const std::set<std::string> kBlocks = {
        "p",       "div",     "h1",    "h2",     "h3",    "h4",      "h5",     "h6",
        "li",      "ul",      "ol",    "table",  "tr",    "td",      "th",     "thead",
        "tbody",   "section", "article", "header", "footer", "blockquote", "pre", "hr",
        "nav",     "aside",   "main",  "figure", "figcaption", "dl", "dt",     "dd",
        "form",    "fieldset"};
    return kBlocks.count(name) > 0;
}

std::string decode_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '&') {
            struct Ent {
                std::string_view name;
                char repl;
            };
            static const Ent kEnts[] = {{"&amp;", '&'},  {"&lt;", '<'},   {"&gt;", '>'},
                                        {"&quot;", '"'}, {"&apos;", '\''}, {"&nbsp;", ' '}};
            bool matched = false;
            for (const auto& e : kEnts) {
                if (s.compare(i, e.name.size(), e.name) == 0) {
                    out.push_back(e.repl);
                    i += e.name.size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
        }
        out.push_back(s[i]);
        ++i;
    }
    return out;
}

std::string strip_html(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '<') {
            out.push_back(s[i]);
            ++i;
            continue;
        }
        // Comments pass as generic tags; script/style swallow their content.
        size_t close = s.find('>', i);
        if (close == std::string::npos) {
            out.push_back(s[i]);
            ++i;
            continue;
        }
        std::string inner = s.substr(i + 1, close - i - 1);
        bool closing = !inner.empty() && inner[0] == '/';
        size_t name_begin = closing ? 1 : 0;
        size_t name_end = name_begin;
        while (name_end < inner.size() && (std::isalnum(static_cast<unsigned char>(inner[name_end])))) {
            ++name_end;
        }
        std::string name = to_lower_ascii(inner.substr(name_begin, name_end - name_begin));
        if (!closing && (name == "script" || name == "style")) {
            std::string end_tag = "</" + name;
            size_t end = s.find(end_tag, close + 1);
            if (end == std::string::npos) {
                i = s.size();  // unterminated: drop the rest
                continue;
            }
            size_t end_close = s.find('>', end);
            i = (end_close == std::string::npos) ? s.size() : end_close + 1;
            continue;
        }
        if (name == "br") {
            out.push_back('\n');
        } else if (is_block_tag(name)) {
            out.append("\n\n");
        }
        i = close + 1;
    }
    return out;
}

// Collapse runs of 3+ newlines (ignoring interleaved spaces/tabs) to "\n\n".
std::string collapse_blank_runs(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '\n') {
            size_t j = i;
            int newlines = 0;
            while (j < s.size() && (s[j] == '\n' || s[j] == ' ' || s[j] == '\t')) {
                if (s[j] == '\n') ++newlines;
                ++j;
            }
            if (newlines >= 2) {
                out.append("\n\n");
            } else {
                out.append(s.substr(i, j - i));
            }
            i = j;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

}  // namespace

std::string normalize_document(std::string_view raw, MediaType media_type) {
    std::string text = repair_utf8(raw);
    text = normalize_line_endings(text);
    if (media_type == MediaType::html) {
        text = strip_html(text);
        text = decode_entities(text);
        text = collapse_blank_runs(text);
        text = trim(text);
    }
    return text;
}

namespace {

// Parses a JSONL file, invoking cb with (line_number, parsed object).
template <typename Cb>
void for_each_jsonl(const std::filesystem::path& path, Cb cb) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CorpusError("missing corpus file: " + path.string());
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw CorpusError("malformed JSON in " + path.filename().string() + " at line " +
                              std::to_string(line_no));
        }
        cb(line_no, j);
    }
}

std::string require_string(const json& j, const char* key, const std::filesystem::path& file,
                           size_t line_no) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw CorpusError("missing or non-string field \"" + std::string(key) + "\" in " +
                          file.filename().string() + " at line " + std::to_string(line_no));
    }
    return j.at(key).get<std::string>();
}

}  // namespace

const Document* Corpus::find_document(const std::string& doc_id) const {
    auto it = std::lower_bound(documents.begin(), documents.end(), doc_id,
                               [](const Document& d, const std::string& id) { return d.doc_id < id; });
    if (it != documents.end() && it->doc_id == doc_id) return &*it;
    return nullptr;
}

const SourceMeta* Corpus::find_source_meta(const std::string& source_id) const {
    for (const auto& m : source_meta) {
        if (m.source_id == source_id) return &m;
    }
    return nullptr;
}

std::vector<std::string> Corpus::source_ids() const {
    std::set<std::string> ids;
    for (const auto& d : documents) ids.insert(d.source_id);
    return std::vector<std::string>(ids.begin(), ids.end());
}

Corpus load_corpus(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    Corpus corpus;

    fs::path sources_path = dir / "sources.jsonl";
    fs::path questions_path = dir / "questions.jsonl";
    fs::path docs_dir = dir / "docs";
    if (!fs::exists(docs_dir)) {
        throw CorpusError("missing corpus directory: " + docs_dir.string());
    }
    if (!fs::exists(questions_path)) {
        throw CorpusError("missing corpus file: " + questions_path.string());
    }

    std::set<std::string> seen_doc_ids;
    for_each_jsonl(sources_path, [&](size_t line_no, const json& j) {
        Document d;
        d.doc_id = require_string(j, "doc_id", sources_path, line_no);
        d.source_id = require_string(j, "source_id", sources_path, line_no);
        d.uri = require_string(j, "uri", sources_path, line_no);
        d.media_type = media_type_from_string(require_string(j, "media_type", sources_path, line_no));
        d.fetched_at = require_string(j, "fetched_at", sources_path, line_no);
        std::string file = require_string(j, "file", sources_path, line_no);
        if (!seen_doc_ids.insert(d.doc_id).second) {
            throw CorpusError("duplicate doc_id \"" + d.doc_id + "\" in " + sources_path.string());
        }
        fs::path doc_path = docs_dir / file;
        std::ifstream in(doc_path, std::ios::binary);
        if (!in) {
            throw CorpusError("missing document file: " + doc_path.string() + " (doc_id " +
                              d.doc_id + ")");
        }
        std::ostringstream raw;
        raw << in.rdbuf();
        std::string raw_str = raw.str();
        d.raw_bytes_len = static_cast<int64_t>(raw_str.size());
        d.text = normalize_document(raw_str, d.media_type);
        corpus.documents.push_back(std::move(d));
    });

    for_each_jsonl(questions_path, [&](size_t line_no, const json& j) {
        QaItem q;
        q.qid = require_string(j, "qid", questions_path, line_no);
        q.question = require_string(j, "question", questions_path, line_no);
        if (!j.contains("answers") || !j.at("answers").is_array() || j.at("answers").empty()) {
            throw CorpusError("question " + q.qid + " has no answers (line " +
                              std::to_string(line_no) + ")");
        }
        for (const auto& a : j.at("answers")) q.answer_aliases.push_back(a.get<std::string>());
        if (j.contains("source_rank")) {
            for (const auto& r : j.at("source_rank")) q.source_rank.push_back(r.get<std::string>());
        }
        for (const auto& doc_id : q.source_rank) {
            if (!seen_doc_ids.count(doc_id)) {
                throw CorpusError("question " + q.qid + " references unknown doc_id \"" + doc_id +
                                  "\"");
            }
        }
        corpus.questions.push_back(std::move(q));
    });

    fs::path meta_path = dir / "sources_meta.jsonl";
    if (fs::exists(meta_path)) {
        for_each_jsonl(meta_path, [&](size_t line_no, const json& j) {
            SourceMeta m;
            m.source_id = require_string(j, "source_id", meta_path, line_no);
            m.title = j.value("title", m.source_id);
            m.license = j.value("license", std::string("proprietary"));
            if (j.contains("topics")) {
                for (const auto& t : j.at("topics")) m.topics.push_back(t.get<std::string>());
            }
            corpus.source_meta.push_back(std::move(m));
        });
    }

    std::sort(corpus.documents.begin(), corpus.documents.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    std::sort(corpus.questions.begin(), corpus.questions.end(),
              [](const QaItem& a, const QaItem& b) { return a.qid < b.qid; });
    std::sort(corpus.source_meta.begin(), corpus.source_meta.end(),
              [](const SourceMeta& a, const SourceMeta& b) { return a.source_id < b.source_id; });
    return corpus;
}

}  // namespace semfabric
