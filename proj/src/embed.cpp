#include "semfabric/embed.hpp"

#include <cmath>

#include "semfabric/util.hpp"

namespace semfabric {

bool EmbeddingVector::is_zero() const {
    for (float v : values) {
        if (v != 0.0f) return false;
    }
    return true;
}

std::string normalize_for_embedding(std::string_view text) {
    return to_lower_ascii(collapse_whitespace(text));
}

EmbeddingVector embed(std::string_view text, const EmbedderSpec& spec) {
    if (spec.dim < 16) throw ParamError("embedder dim must be >= 16");
    if (spec.ngram < 1) throw ParamError("embedder ngram must be >= 1");

    EmbeddingVector out;
    out.model_id = spec.model_id;
    out.dim = spec.dim;
    out.values.assign(spec.dim, 0.0f);

    std::string norm = normalize_for_embedding(text);
    Utf8View view = decode_utf8(norm);
    if (view.size() < spec.ngram) return out;  // zero vector

    std::vector<uint32_t> counts(spec.dim, 0);
    for (size_t i = 0; i + spec.ngram <= view.size(); ++i) {
        std::string_view window = view.slice(norm, i, i + spec.ngram);
        uint64_t h = fnv1a64(window);
        counts[h % spec.dim] += 1;
    }

    double sum_sq = 0.0;
    std::vector<double> weights(spec.dim, 0.0);
    for (size_t b = 0; b < spec.dim; ++b) {
        if (counts[b] == 0) continue;
        double w = std::log1p(static_cast<double>(counts[b]));
        weights[b] = w;
        sum_sq += w * w;
    }
    double norm_l2 = std::sqrt(sum_sq);
    if (norm_l2 > 0.0) {
        for (size_t b = 0; b < spec.dim; ++b) {
            out.values[b] = static_cast<float>(weights[b] / norm_l2);
        }
    }
    return out;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.model_id != b.model_id) {
        throw ComparisonError("embedding model mismatch: \"" + a.model_id + "\" vs \"" +
                              b.model_id + "\"");
    }
    if (a.dim != b.dim || a.values.size() != b.values.size()) {
        throw ComparisonError("embedding dimension mismatch for model \"" + a.model_id + "\": " +
                              std::to_string(a.dim) + " vs " + std::to_string(b.dim));
    }
    double dot = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        dot += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
    }
    return dot;
}

}  // namespace semfabric
