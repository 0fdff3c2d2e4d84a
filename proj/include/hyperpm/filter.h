#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "hyperpm/candidate_space.h"

namespace hyperpm {

struct FilterStats {
  std::size_t candidates_before = 0;
  std::size_t candidates_after = 0;
  std::size_t connections_before = 0;
  // Connections whose both endpoints are still live.
  std::size_t connections_after = 0;
  // Candidate examinations summed over all queue pops.
  std::size_t pairs_processed = 0;
  std::size_t queue_pops = 0;
  std::size_t connection_probes = 0;
};

struct FilterOptions {
  // Shuffle the initial worklist; the surviving sets do not depend on it.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Removes every candidate f ∈ C(e) that has no live connected candidate in
/// C(e') for some query neighbour e', repeating until nothing changes.
/// Worklist of ordered adjacent pairs, FIFO, each pair queued at most once.
FilterStats initial_filter(CandidateSpace& cs, const FilterOptions& options = {});

// True when f has a live connected candidate in the slot's target.
bool has_live_connection(const CandidateSpace& cs, std::size_t slot,
                         CandidateSpace::LocalIndex f, std::size_t* probes = nullptr);

}  // namespace hyperpm
