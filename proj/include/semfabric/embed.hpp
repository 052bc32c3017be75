#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semfabric {

struct EmbedderSpec {
    std::string model_id = "hash3-fnv1a-256-v1";
    size_t dim = 256;
    size_t ngram = 3;
};

// Either all-zero (degenerate text) or unit L2 norm within 1e-6.
struct EmbeddingVector {
    std::string model_id;
    size_t dim = 0;
    std::vector<float> values;

    bool is_zero() const;
};

// Lowercases ASCII letters, squeezes whitespace runs to one space, trims.
std::string normalize_for_embedding(std::string_view text);

// Hashed character-trigram embedding: each ngram window of the normalized
// text is FNV-1a-hashed into one of dim buckets, bucket counts are damped
// with ln(1 + count), and the result is L2-normalized. Texts shorter than
// the ngram size embed to the zero vector.
EmbeddingVector embed(std::string_view text, const EmbedderSpec& spec);

// Dot product of two already-normalized vectors; 0 when either is all-zero.
// Throws ComparisonError on model or dimension mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace semfabric
