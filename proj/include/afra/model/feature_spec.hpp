#pragma once

#include <string>
#include <vector>

#include "afra/data/types.hpp"

namespace afra::model {

struct FeatureDef {
  std::string name;
  int vocab = 0;
  int width = 0;
  bool one_hot = false;  // one-hot blocks have width == vocab and no table
};

// Ordered feature layout; block offsets are identical for every item.
class FeatureSpec {
 public:
  FeatureSpec() = default;
  explicit FeatureSpec(std::vector<FeatureDef> defs);

  // Registry-ordered features from the dataset vocabularies. style and
  // price_bucket become one-hot blocks, the rest learned embeddings.
  static FeatureSpec for_catalog(const data::FeatureVocabs& vocabs, int emb_width);
  // Single item-id embedding, covering the whole catalog.
  static FeatureSpec ids_only(int catalog_size, int emb_width);

  const std::vector<FeatureDef>& defs() const { return defs_; }
  int total_width() const { return total_width_; }
  int offset(const std::string& name) const;
  const FeatureDef& def(const std::string& name) const;
  bool has(const std::string& name) const;

 private:
  std::vector<FeatureDef> defs_;
  std::vector<int> offsets_;
  int total_width_ = 0;
};

}  // namespace afra::model
