#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglens/log_ingest.hpp"
#include "loglens/matrix.hpp"

namespace loglens::embed {

inline constexpr std::size_t kDimension = 512;

struct GroupRef {
  std::string source_path;
  std::int64_t timestamp_ms = 0;
  std::int64_t elapsed_s = 0;
};

struct SentenceVector {
  std::vector<double> values;  // length kDimension, finite
  GroupRef ref;
};

enum class Backend { Hashing, Remote };

struct EmbedderSpec {
  Backend backend = Backend::Hashing;
  std::string remote_endpoint;      // required for Remote
  double timeout_s = 30.0;          // Remote only
  std::size_t batch_size = 64;      // Remote only; groups per request
};

// Tokenizes on single spaces, hashes unigrams and bigrams (joined with "_")
// with FNV-1a 64, bucket = hash % 512, sign from bit 63, then L2-normalizes.
// Empty text maps to the zero vector.
std::vector<double> hash_embed(std::string_view text);

std::vector<SentenceVector> embed_texts(const EmbedderSpec& spec,
                                        const std::vector<std::string>& texts);

// Embeds a parsed document's groups, carrying (source_path, timestamp_ms,
// elapsed_s) through to each vector.
std::vector<SentenceVector> embed_document(const EmbedderSpec& spec,
                                           const ingest::ProfilingDocument& doc);

// Stacks vectors into an n x 512 matrix, row order preserved.
Matrix to_matrix(const std::vector<SentenceVector>& vectors);

// CSV sidecar: header source_path,timestamp_ms,elapsed_s,v0..v511.
void write_embeddings_csv(const std::vector<SentenceVector>& vectors, const std::string& path);
std::vector<SentenceVector> read_embeddings_csv(const std::string& path);

// Remote wire contract: POST {"sentences":[...]} -> {"vectors":[[512]...]};
// non-2xx, wrong dimension, and non-finite values are typed errors.
std::vector<std::vector<double>> remote_embed(const std::string& endpoint,
                                              const std::vector<std::string>& texts,
                                              double timeout_s = 30.0);

}  // namespace loglens::embed
