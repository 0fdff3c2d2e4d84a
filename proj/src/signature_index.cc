#include "hyperpm/signature_index.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>

#include "hyperpm/errors.h"

namespace hyperpm {

namespace {

constexpr std::array<char, 8> kMagic = {'H', 'P', 'M', 'I', 'D', 'X', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_pod(std::istream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

}  // namespace

SignatureIndex SignatureIndex::build(const Hypergraph& h) {
  SignatureIndex idx;
  idx.edge_signatures_.reserve(h.num_edges());
  std::map<Signature, std::vector<EdgeId>> buckets;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    idx.edge_signatures_.push_back(edge_signature(h, e));
    buckets[idx.edge_signatures_.back()].push_back(e);
  }
  for (auto& [key, edges] : buckets) {
    idx.keys_.push_back(key);
    idx.bucket_edges_.push_back(std::move(edges));
  }
  idx.finalize();
  return idx;
}

void SignatureIndex::finalize() {
  bucket_of_.clear();
  bucket_of_.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) bucket_of_.emplace(keys_[i], i);
}

std::span<const EdgeId> SignatureIndex::lookup(const Signature& s) const {
  auto it = bucket_of_.find(s);
  if (it == bucket_of_.end()) return {};
  return bucket_edges_[it->second];
}

void SignatureIndex::save(std::ostream& out, std::uint64_t hash) const {
  out.write(kMagic.data(), kMagic.size());
  write_pod<std::uint64_t>(out, hash);
  write_pod<std::uint64_t>(out, edge_signatures_.size());
  write_pod<std::uint64_t>(out, keys_.size());
  for (std::size_t b = 0; b < keys_.size(); ++b) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(keys_[b].size()));
    for (LabelId l : keys_[b].labels()) write_pod<std::uint32_t>(out, l);
    write_pod<std::uint64_t>(out, bucket_edges_[b].size());
    for (EdgeId e : bucket_edges_[b]) write_pod<std::uint32_t>(out, e);
  }
}

std::optional<SignatureIndex> SignatureIndex::load(std::istream& in, std::uint64_t hash) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) return std::nullopt;
  std::uint64_t stored_hash = 0;
  std::uint64_t num_edges = 0;
  std::uint64_t num_buckets = 0;
  if (!read_pod(in, stored_hash) || stored_hash != hash) return std::nullopt;
  if (!read_pod(in, num_edges) || !read_pod(in, num_buckets)) return std::nullopt;

  SignatureIndex idx;
  idx.edge_signatures_.assign(num_edges, Signature{});
  std::vector<bool> filled(num_edges, false);
  for (std::uint64_t b = 0; b < num_buckets; ++b) {
    std::uint32_t sig_len = 0;
    if (!read_pod(in, sig_len)) return std::nullopt;
    std::vector<LabelId> labels(sig_len);
    for (auto& l : labels) {
      if (!read_pod(in, l)) return std::nullopt;
    }
    std::uint64_t count = 0;
    if (!read_pod(in, count) || count > num_edges) return std::nullopt;
    std::vector<EdgeId> edges(count);
    for (auto& e : edges) {
      if (!read_pod(in, e) || e >= num_edges || filled[e]) return std::nullopt;
      filled[e] = true;
    }
    Signature key(std::move(labels));
    for (EdgeId e : edges) idx.edge_signatures_[e] = key;
    idx.keys_.push_back(std::move(key));
    idx.bucket_edges_.push_back(std::move(edges));
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) return std::nullopt;
  idx.finalize();
  return idx;
}

std::uint64_t content_hash(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content_hash(bytes);
}

}  // namespace hyperpm
