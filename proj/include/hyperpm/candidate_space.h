#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hyperpm/hypergraph.h"
#include "hyperpm/signature_index.h"

namespace hyperpm {

/// Candidate hyperedge space for one query against one data hypergraph.
///
/// Every query hyperedge e owns the fixed list C_ini(e) of data hyperedges
/// with its signature; a candidate is addressed by its local index into that
/// list. The live set C(e) is a dense array of local indices plus a position
/// map, so removal is a swap-remove and every removal is journaled for exact
/// LIFO undo.
///
/// Connections are stored per ordered pair (e, e') of adjacent query
/// hyperedges ("slot"): f ∈ C_ini(e) and f' ∈ C_ini(e') are connected iff f
/// and f' are adjacent in the data hypergraph and their intersection has the
/// same signature as e ∩ e'. Connections are never removed; liveness is
/// decided by membership in C(e).
class CandidateSpace {
 public:
  using LocalIndex = std::uint32_t;
  static constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

  struct Mark {
    std::size_t id = 0;
    std::size_t journal_size = 0;
  };

  static CandidateSpace build(const Hypergraph& q, const Hypergraph& data,
                              const SignatureIndex& index);

  std::size_t num_query_edges() const { return initial_.size(); }

  // Query structure.
  std::span<const EdgeId> query_neighbors(EdgeId e) const { return neighbors_[e]; }
  // Slot ids parallel to query_neighbors(e).
  std::span<const std::size_t> slots_of(EdgeId e) const { return slots_of_[e]; }
  std::size_t slot(EdgeId e, EdgeId e2) const;
  std::size_t num_slots() const { return slots_.size(); }
  EdgeId slot_source(std::size_t s) const { return slots_[s].source; }
  EdgeId slot_target(std::size_t s) const { return slots_[s].target; }
  // Sig(e ∩ e') for the slot's query pair.
  const Signature& slot_signature(std::size_t s) const { return slots_[s].signature; }
  std::size_t reverse_slot(std::size_t s) const { return slots_[s].reverse; }

  // Candidates by data hyperedge id.
  std::size_t size(EdgeId e) const { return live_[e].size(); }
  bool contains(EdgeId e, EdgeId f) const;
  // Live candidates in current storage order.
  std::vector<EdgeId> candidates(EdgeId e) const;
  std::span<const EdgeId> initial_candidates(EdgeId e) const { return initial_[e]; }
  std::size_t total_candidates() const;

  // Candidates by local index.
  std::span<const LocalIndex> live(EdgeId e) const { return live_[e]; }
  bool is_live(EdgeId e, LocalIndex i) const { return position_[e][i] != kRemoved; }
  EdgeId data_edge(EdgeId e, LocalIndex i) const { return initial_[e][i]; }
  std::optional<LocalIndex> local_index(EdgeId e, EdgeId f) const;

  // Connection queries. The data-id form throws ContractViolation when e and
  // e2 are not adjacent in the query.
  bool is_connected(EdgeId e, EdgeId f, EdgeId e2, EdgeId f2) const;
  bool connected_local(std::size_t slot, LocalIndex i, LocalIndex j) const {
    return slots_[slot].pairs.contains(pair_key(i, j));
  }
  // Local indices in C_ini(target) connected to candidate i of source.
  std::span<const LocalIndex> connections(std::size_t slot, LocalIndex i) const {
    const auto& s = slots_[slot];
    return {s.targets.data() + s.offsets[i], s.targets.data() + s.offsets[i + 1]};
  }
  // Undirected connection counts over all adjacent query pairs.
  std::size_t total_connections() const;
  std::size_t live_connections() const;

  // Throws ContractViolation when f is not currently in C(e).
  void remove(EdgeId e, EdgeId f);
  void remove_local(EdgeId e, LocalIndex i);

  Mark checkpoint();
  // Marks must be rolled back newest first; anything else is a
  // ContractViolation.
  void rollback(Mark m);
  std::size_t journal_size() const { return journal_.size(); }
  std::size_t open_marks() const { return marks_.size(); }

 private:
  static constexpr LocalIndex kRemoved = static_cast<LocalIndex>(-1);

  static std::uint64_t pair_key(LocalIndex i, LocalIndex j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
  }

  struct Slot {
    EdgeId source = 0;
    EdgeId target = 0;
    std::size_t reverse = 0;
    Signature signature;
    std::vector<std::size_t> offsets;
    std::vector<LocalIndex> targets;
    std::unordered_set<std::uint64_t> pairs;
  };

  struct Removal {
    EdgeId query_edge;
    LocalIndex local;
    LocalIndex position;
  };

  std::vector<std::vector<EdgeId>> initial_;
  std::vector<std::unordered_map<EdgeId, LocalIndex>> local_of_;
  std::vector<std::vector<LocalIndex>> live_;
  std::vector<std::vector<LocalIndex>> position_;

  std::vector<std::vector<EdgeId>> neighbors_;
  std::vector<std::vector<std::size_t>> slots_of_;
  std::vector<std::size_t> slot_table_;  // m x m, kNoSlot when not adjacent
  std::vector<Slot> slots_;

  std::vector<Removal> journal_;
  std::vector<Mark> marks_;
  std::size_t next_mark_id_ = 1;
};

}  // namespace hyperpm
