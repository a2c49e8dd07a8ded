#include "loglens/embed.hpp"

#include <cmath>
#include <string_view>

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"
#include "loglens/rng.hpp"

namespace loglens::embed {
namespace {

void accumulate_ngram(std::string_view ngram, std::vector<double>& acc) {
  std::uint64_t h = fnv1a64(ngram);
  std::size_t bucket = h % kDimension;
  acc[bucket] += (h >> 63) ? -1.0 : 1.0;
}

std::vector<SentenceVector> hashing_batch(const std::vector<std::string>& texts) {
  std::vector<SentenceVector> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out[i].values = hash_embed(texts[i]);
  return out;
}

std::vector<SentenceVector> remote_batch(const EmbedderSpec& spec,
                                         const std::vector<std::string>& texts) {
  std::vector<SentenceVector> out;
  out.reserve(texts.size());
  std::size_t batch = spec.batch_size == 0 ? texts.size() : spec.batch_size;
  for (std::size_t start = 0; start < texts.size(); start += batch) {
    std::size_t end = std::min(texts.size(), start + batch);
    std::vector<std::string> slice(texts.begin() + start, texts.begin() + end);
    auto vectors = remote_embed(spec.remote_endpoint, slice, spec.timeout_s);
    for (auto& v : vectors) {
      SentenceVector sv;
      sv.values = std::move(v);
      out.push_back(std::move(sv));
    }
  }
  return out;
}

}  // namespace

std::vector<double> hash_embed(std::string_view text) {
  std::vector<double> acc(kDimension, 0.0);
  std::string_view prev;
  bool any = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t space = text.find(' ', pos);
    if (space == std::string_view::npos) space = text.size();
    std::string_view token = text.substr(pos, space - pos);
    pos = space + 1;
    if (token.empty()) continue;
    any = true;
    accumulate_ngram(token, acc);
    if (!prev.empty()) {
      std::string bigram;
      bigram.reserve(prev.size() + 1 + token.size());
      bigram.append(prev);
      bigram.push_back('_');
      bigram.append(token);
      accumulate_ngram(bigram, acc);
    }
    prev = token;
  }
  if (!any) return acc;

  double sq = 0.0;
  for (double v : acc) sq += v * v;
  if (sq > 0.0) {
    double inv = 1.0 / std::sqrt(sq);
    for (double& v : acc) v *= inv;
  }
  return acc;
}

std::vector<SentenceVector> embed_texts(const EmbedderSpec& spec,
                                        const std::vector<std::string>& texts) {
  if (spec.backend == Backend::Remote && spec.remote_endpoint.empty())
    throw ConfigError("remote embedder requires an endpoint");
  return spec.backend == Backend::Hashing ? hashing_batch(texts) : remote_batch(spec, texts);
}

std::vector<SentenceVector> embed_document(const EmbedderSpec& spec,
                                           const ingest::ProfilingDocument& doc) {
  std::vector<std::string> texts;
  texts.reserve(doc.groups.size());
  for (const auto& g : doc.groups) texts.push_back(g.text);
  auto vectors = embed_texts(spec, texts);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    vectors[i].ref.source_path = doc.source_path;
    vectors[i].ref.timestamp_ms = doc.groups[i].timestamp_ms;
    vectors[i].ref.elapsed_s = doc.groups[i].elapsed_s;
  }
  return vectors;
}

Matrix to_matrix(const std::vector<SentenceVector>& vectors) {
  Matrix m(vectors.size(), kDimension);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < kDimension; ++j) m(i, j) = vectors[i].values[j];
  return m;
}

void write_embeddings_csv(const std::vector<SentenceVector>& vectors, const std::string& path) {
  std::string out = "source_path,timestamp_ms,elapsed_s";
  for (std::size_t j = 0; j < kDimension; ++j) {
    out += ",v";
    out += std::to_string(j);
  }
  out.push_back('\n');
  for (const auto& v : vectors) {
    out += csv_escape(v.ref.source_path);
    out += ',';
    out += std::to_string(v.ref.timestamp_ms);
    out += ',';
    out += std::to_string(v.ref.elapsed_s);
    for (double x : v.values) {
      out += ',';
      out += format_double(x);
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

std::vector<SentenceVector> read_embeddings_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<SentenceVector> out;
  bool header_seen = false;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    auto fields = parse_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 + kDimension || fields[0] != "source_path")
        throw ConfigError("embeddings header mismatch in " + path);
      continue;
    }
    if (fields.size() != 3 + kDimension)
      throw ConfigError("embeddings row has wrong width in " + path);
    SentenceVector v;
    v.ref.source_path = fields[0];
    auto ts = parse_int(fields[1]);
    auto es = parse_int(fields[2]);
    if (!ts || !es) throw ConfigError("embeddings row has bad metadata in " + path);
    v.ref.timestamp_ms = *ts;
    v.ref.elapsed_s = *es;
    v.values.resize(kDimension);
    for (std::size_t j = 0; j < kDimension; ++j) {
      auto d = parse_double(fields[3 + j]);
      if (!d || !std::isfinite(*d))
        throw ConfigError("embeddings row has non-numeric value in " + path);
      v.values[j] = *d;
    }
    out.push_back(std::move(v));
  }
  if (!header_seen) throw ConfigError("embeddings file is empty: " + path);
  return out;
}

}  // namespace loglens::embed
