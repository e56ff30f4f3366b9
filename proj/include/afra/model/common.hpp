#pragma once

#include <cstdint>

#include "afra/rng.hpp"

namespace afra::model {

// Deterministic dropout seeding: every dropout call site inside one forward
// pass draws the next site id, so a fixed (seed, step) pair reproduces the
// exact mask sequence.
struct DropoutCtx {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  mutable std::uint64_t site = 0;

  std::uint64_t next_site_seed() const { return hash_mix(hash_mix(seed, step), ++site); }
};

}  // namespace afra::model
