#pragma once

#include <span>
#include <vector>

#include "afra/data/dataset.hpp"

namespace afra::model {

// Maps between catalog item ids of the predicted entity type and dense
// softmax-head indices.
class TargetVocab {
 public:
  TargetVocab() = default;
  TargetVocab(const data::Catalog& catalog, data::EntityType entity);
  TargetVocab(std::vector<int> ids, int catalog_size);

  int size() const { return static_cast<int>(ids_.size()); }
  std::span<const int> ids() const { return ids_; }
  int id_at(int index) const { return ids_.at(static_cast<std::size_t>(index)); }
  // -1 when the item is not part of the target vocabulary.
  int index_of(int item_id) const {
    if (item_id < 0 || static_cast<std::size_t>(item_id) >= index_.size()) return -1;
    return index_[static_cast<std::size_t>(item_id)];
  }

 private:
  std::vector<int> ids_;    // ascending item ids
  std::vector<int> index_;  // item id -> dense index
};

}  // namespace afra::model
