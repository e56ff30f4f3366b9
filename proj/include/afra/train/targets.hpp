#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "afra/data/dataset.hpp"
#include "afra/model/target_vocab.hpp"

namespace afra::train {

struct TargetAssignment {
  std::vector<int> target_index;         // next item's target-vocab index, -1 none
  std::vector<std::uint8_t> target_mask;  // 1 iff that next item must be predicted
};

// Shifted next-item targets. mask[p] = 1 only when position p+1 holds an
// available item of the target entity type; context positions (item id -1)
// and the last position carry 0.
TargetAssignment build_targets(std::span<const int> position_item_ids,
                               const data::Catalog& catalog,
                               const model::TargetVocab& tvocab);

}  // namespace afra::train
