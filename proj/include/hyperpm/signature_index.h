#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperpm/hypergraph.h"

namespace hyperpm {

/// Partition of data hyperedges by signature, built once per dataset.
/// Buckets list hyperedge ids ascending; bucket keys iterate in signature
/// order.
class SignatureIndex {
 public:
  SignatureIndex() = default;

  static SignatureIndex build(const Hypergraph& h);

  // Empty span when no data hyperedge carries `s`.
  std::span<const EdgeId> lookup(const Signature& s) const;

  const Signature& signature(EdgeId e) const { return edge_signatures_[e]; }
  std::size_t num_edges() const { return edge_signatures_.size(); }
  std::size_t num_buckets() const { return keys_.size(); }
  // Bucket keys in ascending signature order.
  std::span<const Signature> keys() const { return keys_; }

  // Binary cache, tagged with the content hash of the source file.
  void save(std::ostream& out, std::uint64_t content_hash) const;
  // Returns nullopt when the stream is not a cache for `content_hash`.
  static std::optional<SignatureIndex> load(std::istream& in, std::uint64_t content_hash);

  friend bool operator==(const SignatureIndex& a, const SignatureIndex& b) {
    return a.edge_signatures_ == b.edge_signatures_ && a.keys_ == b.keys_ &&
           a.bucket_edges_ == b.bucket_edges_;
  }

 private:
  void finalize();

  std::vector<Signature> edge_signatures_;
  std::vector<Signature> keys_;
  std::vector<std::vector<EdgeId>> bucket_edges_;
  std::unordered_map<Signature, std::size_t, SignatureHash> bucket_of_;
};

// 64-bit FNV-1a over raw bytes.
std::uint64_t content_hash(std::string_view bytes);
std::uint64_t file_content_hash(const std::string& path);

}  // namespace hyperpm
