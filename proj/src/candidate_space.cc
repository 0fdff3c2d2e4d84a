#include "hyperpm/candidate_space.h"

#include <algorithm>
#include <string>
#include <utility>

#include "hyperpm/errors.h"

namespace hyperpm {

namespace {

// Sig(f ∩ g) == expected, with early exit once the intersection outgrows it.
bool intersection_matches(const Hypergraph& h, EdgeId f, EdgeId g, const Signature& expected) {
  auto a = h.edge(f);
  auto b = h.edge(g);
  std::vector<LabelId> labels;
  labels.reserve(expected.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      if (labels.size() == expected.size()) return false;
      labels.push_back(h.label(a[i]));
      ++i;
      ++j;
    }
  }
  if (labels.size() != expected.size()) return false;
  std::sort(labels.begin(), labels.end());
  return std::equal(labels.begin(), labels.end(), expected.labels().begin());
}

}  // namespace

CandidateSpace CandidateSpace::build(const Hypergraph& q, const Hypergraph& data,
                                     const SignatureIndex& index) {
  const std::size_t m = q.num_edges();
  if (m > kMaxQueryEdges) throw CapacityError("query exceeds " + std::to_string(kMaxQueryEdges) + " hyperedges");

  CandidateSpace cs;
  cs.initial_.resize(m);
  cs.local_of_.resize(m);
  cs.live_.resize(m);
  cs.position_.resize(m);
  for (EdgeId e = 0; e < m; ++e) {
    auto bucket = index.lookup(edge_signature(q, e));
    cs.initial_[e].assign(bucket.begin(), bucket.end());
    const auto n = static_cast<LocalIndex>(bucket.size());
    cs.local_of_[e].reserve(n);
    cs.live_[e].resize(n);
    cs.position_[e].resize(n);
    for (LocalIndex i = 0; i < n; ++i) {
      cs.local_of_[e].emplace(bucket[i], i);
      cs.live_[e][i] = i;
      cs.position_[e][i] = i;
    }
  }

  cs.neighbors_.resize(m);
  cs.slots_of_.resize(m);
  cs.slot_table_.assign(m * m, kNoSlot);
  for (EdgeId e = 0; e < m; ++e) {
    for (EdgeId e2 : q.adjacent_edges(e)) {
      const std::size_t s = cs.slots_.size();
      cs.slot_table_[e * m + e2] = s;
      cs.neighbors_[e].push_back(e2);
      cs.slots_of_[e].push_back(s);
      Slot slot;
      slot.source = e;
      slot.target = e2;
      slot.signature = intersection_signature(q, e, q, e2);
      cs.slots_.push_back(std::move(slot));
    }
  }
  for (std::size_t s = 0; s < cs.slots_.size(); ++s) {
    cs.slots_[s].reverse = cs.slot(cs.slots_[s].target, cs.slots_[s].source);
  }

  // Discover connections from the data side: for each candidate f of e, only
  // hyperedges adjacent to f in the data hypergraph can be connected.
  std::vector<std::vector<std::pair<LocalIndex, LocalIndex>>> found(cs.slots_.size());
  for (std::size_t s = 0; s < cs.slots_.size(); ++s) {
    const Slot& slot = cs.slots_[s];
    if (slot.source > slot.target) continue;
    const auto& target_local = cs.local_of_[slot.target];
    if (target_local.empty()) continue;
    for (LocalIndex i = 0; i < cs.initial_[slot.source].size(); ++i) {
      const EdgeId f = cs.initial_[slot.source][i];
      for (EdgeId g : data.adjacent_edges(f)) {
        auto it = target_local.find(g);
        if (it == target_local.end()) continue;
        if (!intersection_matches(data, f, g, slot.signature)) continue;
        found[s].emplace_back(i, it->second);
        found[slot.reverse].emplace_back(it->second, i);
      }
    }
  }
  for (std::size_t s = 0; s < cs.slots_.size(); ++s) {
    Slot& slot = cs.slots_[s];
    auto& pairs = found[s];
    std::sort(pairs.begin(), pairs.end());
    const std::size_t n = cs.initial_[slot.source].size();
    slot.offsets.assign(n + 1, 0);
    slot.targets.reserve(pairs.size());
    slot.pairs.reserve(pairs.size());
    for (auto [i, j] : pairs) {
      ++slot.offsets[i + 1];
      slot.targets.push_back(j);
      slot.pairs.insert(pair_key(i, j));
    }
    for (std::size_t i = 0; i < n; ++i) slot.offsets[i + 1] += slot.offsets[i];
  }
  return cs;
}

std::size_t CandidateSpace::slot(EdgeId e, EdgeId e2) const {
  const std::size_t m = num_query_edges();
  if (e >= m || e2 >= m) return kNoSlot;
  return slot_table_[e * m + e2];
}

std::optional<CandidateSpace::LocalIndex> CandidateSpace::local_index(EdgeId e, EdgeId f) const {
  auto it = local_of_[e].find(f);
  if (it == local_of_[e].end()) return std::nullopt;
  return it->second;
}

bool CandidateSpace::contains(EdgeId e, EdgeId f) const {
  auto i = local_index(e, f);
  return i.has_value() && is_live(e, *i);
}

std::vector<EdgeId> CandidateSpace::candidates(EdgeId e) const {
  std::vector<EdgeId> out;
  out.reserve(live_[e].size());
  for (LocalIndex i : live_[e]) out.push_back(initial_[e][i]);
  return out;
}

std::size_t CandidateSpace::total_candidates() const {
  std::size_t total = 0;
  for (const auto& l : live_) total += l.size();
  return total;
}

bool CandidateSpace::is_connected(EdgeId e, EdgeId f, EdgeId e2, EdgeId f2) const {
  const std::size_t s = slot(e, e2);
  if (s == kNoSlot) {
    throw ContractViolation("is_connected: query hyperedges " + std::to_string(e) + " and " +
                            std::to_string(e2) + " are not adjacent");
  }
  auto i = local_index(e, f);
  auto j = local_index(e2, f2);
  if (!i || !j) return false;
  return connected_local(s, *i, *j);
}

std::size_t CandidateSpace::total_connections() const {
  std::size_t total = 0;
  for (const Slot& s : slots_) {
    if (s.source < s.target) total += s.targets.size();
  }
  return total;
}

std::size_t CandidateSpace::live_connections() const {
  std::size_t total = 0;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    if (slot.source > slot.target) continue;
    for (LocalIndex i : live_[slot.source]) {
      for (LocalIndex j : connections(s, i)) {
        if (is_live(slot.target, j)) ++total;
      }
    }
  }
  return total;
}

void CandidateSpace::remove(EdgeId e, EdgeId f) {
  auto i = local_index(e, f);
  if (!i || !is_live(e, *i)) {
    throw ContractViolation("remove: data hyperedge " + std::to_string(f) +
                            " is not a live candidate of query hyperedge " + std::to_string(e));
  }
  remove_local(e, *i);
}

void CandidateSpace::remove_local(EdgeId e, LocalIndex i) {
  auto& live = live_[e];
  auto& pos = position_[e];
  const LocalIndex p = pos[i];
  if (p == kRemoved) {
    throw ContractViolation("remove: candidate " + std::to_string(initial_[e][i]) +
                            " already removed from query hyperedge " + std::to_string(e));
  }
  const LocalIndex last = live.back();
  live[p] = last;
  pos[last] = p;
  live.pop_back();
  pos[i] = kRemoved;
  journal_.push_back({e, i, p});
}

CandidateSpace::Mark CandidateSpace::checkpoint() {
  Mark m{next_mark_id_++, journal_.size()};
  marks_.push_back(m);
  return m;
}

void CandidateSpace::rollback(Mark m) {
  if (marks_.empty() || marks_.back().id != m.id) {
    throw ContractViolation("rollback: mark " + std::to_string(m.id) +
                            " is not the most recent open checkpoint");
  }
  marks_.pop_back();
  while (journal_.size() > m.journal_size) {
    const Removal r = journal_.back();
    journal_.pop_back();
    auto& live = live_[r.query_edge];
    auto& pos = position_[r.query_edge];
    // Inverse of the swap-remove: the element now at r.position returns to
    // the back and the removed candidate takes its slot again.
    if (r.position == live.size()) {
      live.push_back(r.local);
    } else {
      const LocalIndex moved = live[r.position];
      live.push_back(moved);
      pos[moved] = static_cast<LocalIndex>(live.size() - 1);
      live[r.position] = r.local;
    }
    pos[r.local] = r.position;
  }
}

}  // namespace hyperpm
