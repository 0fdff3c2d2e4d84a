#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperpm/candidate_space.h"
#include "hyperpm/filter.h"
#include "hyperpm/hypergraph.h"
#include "hyperpm/signature_index.h"

namespace hyperpm {

// Which in-search pruning runs after each extension. kNone and
// kConnectivity verify every extension with the intersection check instead.
enum class FilterMode { kNone, kConnectivity, kIntersection, kBoth };

enum class OrderPolicy {
  kHybrid,         // single candidate, then most unmapped neighbours, then fewest candidates
  kAdjacency,      // most unmapped neighbours only
  kCandidateSize,  // fewest candidates only
};

enum class SearchStatus { kDone, kLimit, kTimeout };

std::string_view to_string(FilterMode mode);
std::string_view to_string(OrderPolicy policy);
std::string_view to_string(SearchStatus status);
std::optional<FilterMode> parse_filter_mode(std::string_view text);
std::optional<OrderPolicy> parse_order_policy(std::string_view text);

struct SearchConfig {
  std::optional<std::uint64_t> embedding_limit;
  std::optional<std::chrono::duration<double>> time_limit;
  FilterMode mode = FilterMode::kBoth;
  OrderPolicy order = OrderPolicy::kHybrid;
  // Replaces the lowest-id final tiebreak with a seeded permutation.
  std::optional<std::uint64_t> tiebreak_seed;
  bool collect_stats = true;
  // Test hook: skip the per-extension compatibility check in kNone and
  // kConnectivity. Produces wrong answers; exists so verifiers can be tested.
  bool skip_extension_verification = false;
};

struct SearchStats {
  std::uint64_t embeddings_found = 0;
  std::uint64_t recursive_calls = 0;
  std::uint64_t candidates_pruned_stage1 = 0;
  std::uint64_t candidates_pruned_stage2 = 0;
  std::uint64_t intersection_checks = 0;
  std::uint64_t vertex_touches = 0;
  double wall_time_seconds = 0.0;
  bool truncated = false;
  SearchStatus status = SearchStatus::kDone;
};

/// Incident hyperedge bitmaps. Bit d of a vertex's word is set iff the
/// vertex lies in the hyperedge mapped (or probed) at depth d.
class IhbState {
 public:
  IhbState() = default;
  IhbState(std::size_t query_vertices, std::size_t data_vertices)
      : query_(query_vertices, 0), data_(data_vertices, 0) {}

  std::uint64_t query_bitmap(VertexId u) const { return query_[u]; }
  std::uint64_t data_bitmap(VertexId v) const { return data_[v]; }
  std::span<const std::uint64_t> query_bitmaps() const { return query_; }
  std::span<const std::uint64_t> data_bitmaps() const { return data_; }

  // Set / clear bit `depth` on every vertex of e (query) and f (data).
  // ContractViolation if a bit is already set / not set.
  void update(const Hypergraph& q, EdgeId e, const Hypergraph& data, EdgeId f, std::size_t depth);
  void restore(const Hypergraph& q, EdgeId e, const Hypergraph& data, EdgeId f, std::size_t depth);

  bool all_zero() const;

 private:
  friend class Matcher;
  std::vector<std::uint64_t> query_;
  std::vector<std::uint64_t> data_;
};

// One vertex of a probed hyperedge: its cell bitmap and label.
struct CellEntry {
  std::uint64_t bitmap = 0;
  LabelId label = 0;
  friend auto operator<=>(const CellEntry&, const CellEntry&) = default;
};

// Live candidate sets (sorted) and bitmaps at one instant of the search.
struct SearchSnapshot {
  std::vector<std::vector<EdgeId>> live;
  std::vector<std::uint64_t> query_bitmaps;
  std::vector<std::uint64_t> data_bitmaps;
  friend bool operator==(const SearchSnapshot&, const SearchSnapshot&) = default;
};

class Matcher;

// Optional instrumentation callbacks; all default to no-ops.
class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  virtual void on_intersection_check(EdgeId /*e*/, EdgeId /*f*/, std::size_t /*touches*/,
                                     bool /*compatible*/) {}
  // Around each candidate branch; depth is |M| before the extension.
  virtual void on_branch_begin(std::size_t /*depth*/, const Matcher& /*m*/) {}
  virtual void on_branch_end(std::size_t /*depth*/, const Matcher& /*m*/) {}
};

// Receives each embedding indexed by query hyperedge id.
using EmbeddingSink = std::function<void(std::span<const EdgeId>)>;

/// Match-and-Filter backtracking over a filtered candidate space.
///
/// Owns the partial embedding and bitmaps; mutates `cs` only through
/// journaled removals that are rolled back after each branch, so the space
/// is back at its post-filter state when run() returns.
class Matcher {
 public:
  Matcher(const Hypergraph& q, const Hypergraph& data, CandidateSpace& cs, SearchConfig config = {});

  SearchStats run(const EmbeddingSink& sink, SearchObserver* observer = nullptr);

  // Primitive steps, public so the pruning stages can be driven directly.
  std::size_t depth() const { return mapping_.size(); }
  std::span<const std::pair<EdgeId, EdgeId>> mapping() const { return mapping_; }
  bool is_mapped(EdgeId e) const { return mapped_to_[e] != kUnmapped; }
  // Appends (e, f) and sets bit depth() on both sides.
  void extend(EdgeId e, EdgeId f);
  // Undoes the latest extend().
  void retract();

  EdgeId choose_next_edge() const;
  // Removes candidates of unmapped neighbours of e_new not connected to f_new.
  std::size_t connectivity_prune(EdgeId e_new, EdgeId f_new);
  // Removes every candidate of every unmapped edge that fails
  // check_intersection. With stop_on_empty, returns as soon as a candidate
  // set empties.
  std::size_t intersection_prune(bool stop_on_empty = false);
  // Whether mapping(e) = f keeps the partial embedding valid; probes at bit
  // depth(). Leaves the bitmaps unchanged.
  bool check_intersection(EdgeId e, EdgeId f);

  // Sorted cell arrays built by the last check_intersection call.
  std::span<const CellEntry> last_query_cells() const { return query_cells_; }
  std::span<const CellEntry> last_data_cells() const { return data_cells_; }

  const IhbState& ihb() const { return ihb_; }
  const CandidateSpace& candidate_space() const { return cs_; }
  const SearchStats& stats() const { return stats_; }
  SearchSnapshot snapshot() const;

 private:
  static constexpr EdgeId kUnmapped = static_cast<EdgeId>(-1);

  void recurse();
  bool any_unmapped_empty() const;
  bool out_of_time();

  const Hypergraph& q_;
  const Hypergraph& data_;
  CandidateSpace& cs_;
  SearchConfig config_;

  IhbState ihb_;
  std::vector<std::pair<EdgeId, EdgeId>> mapping_;
  std::vector<EdgeId> mapped_to_;
  std::vector<std::size_t> tiebreak_rank_;
  std::vector<std::vector<CandidateSpace::LocalIndex>> branch_buffers_;
  std::vector<CellEntry> query_cells_;
  std::vector<CellEntry> data_cells_;
  std::vector<EdgeId> embedding_;

  SearchStats stats_;
  const EmbeddingSink* sink_ = nullptr;
  SearchObserver* observer_ = nullptr;
  std::chrono::steady_clock::time_point start_;
  bool stop_ = false;
};

SearchStats match_all(const Hypergraph& q, const Hypergraph& data, CandidateSpace& cs,
                      const SearchConfig& config, const EmbeddingSink& sink);

struct QueryResult {
  FilterStats filter;
  SearchStats search;
};

/// Full pipeline for one query: validate, build the candidate space, filter,
/// then search.
QueryResult match_query(const Hypergraph& q, const Hypergraph& data, const SignatureIndex& index,
                        const SearchConfig& config, const EmbeddingSink& sink);

}  // namespace hyperpm
