#include "afra/train/targets.hpp"

namespace afra::train {

TargetAssignment build_targets(std::span<const int> position_item_ids,
                               const data::Catalog& catalog,
                               const model::TargetVocab& tvocab) {
  const std::size_t n = position_item_ids.size();
  TargetAssignment out;
  out.target_index.assign(n, -1);
  out.target_mask.assign(n, 0);
  for (std::size_t p = 0; p + 1 < n; ++p) {
    if (position_item_ids[p] < 0) continue;  // context positions never predict
    const int next = position_item_ids[p + 1];
    if (next < 0) continue;
    const int idx = tvocab.index_of(next);
    if (idx < 0) continue;  // next item is not of the predicted entity type
    out.target_index[p] = idx;
    if (catalog.item(next).available) out.target_mask[p] = 1;
  }
  return out;
}

}  // namespace afra::train
