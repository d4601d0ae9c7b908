#pragma once

#include <vector>

#include "pal/types.hpp"

namespace pal::ppo {

// Transition stream of one environment. `done[t]` marks the end of an
// episode; `bootstrap[t]` is the value attached past transition t: 0 for
// terminal states, V(s_{t+1}) for time-limit or batch-end truncation. The
// bootstrap of a non-final, non-done transition is ignored (the stored value
// of t+1 is used instead).
struct GaeStream {
  VecX rewards;
  VecX values;
  std::vector<uint8_t> done;
  VecX bootstrap;
};

struct GaeResult {
  VecX advantages;
  VecX returns;
};

// A_t = sum_k (gamma*lambda)^k delta_{t+k} within each episode segment.
GaeResult compute_gae(const GaeStream& stream, double gamma, double lambda);

// Normalizes a concatenated advantage batch to zero mean, unit std in place.
void normalize_advantages(VecX& advantages);

}  // namespace pal::ppo
