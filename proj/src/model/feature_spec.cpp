#include "afra/model/feature_spec.hpp"

#include <algorithm>

#include "afra/model/target_vocab.hpp"

namespace afra::model {

FeatureSpec::FeatureSpec(std::vector<FeatureDef> defs) : defs_(std::move(defs)) {
  offsets_.reserve(defs_.size());
  for (const FeatureDef& d : defs_) {
    if (d.width <= 0) throw ConfigError("feature " + d.name + " has non-positive width");
    if (d.vocab <= 0) throw ConfigError("feature " + d.name + " has non-positive vocab");
    if (d.one_hot && d.width != d.vocab) throw ConfigError("one-hot feature " + d.name + " must have width == vocab");
    offsets_.push_back(total_width_);
    total_width_ += d.width;
  }
}

FeatureSpec FeatureSpec::for_catalog(const data::FeatureVocabs& vocabs, int emb_width) {
  vocabs.validate();
  std::vector<FeatureDef> defs;
  for (const std::string& name : data::feature_registry()) {
    if (!vocabs.has(name)) continue;
    const int vocab = vocabs.vocab(name);
    const bool one_hot = name == "style" || name == "price_bucket";
    defs.push_back({name, vocab, one_hot ? vocab : emb_width, one_hot});
  }
  if (defs.empty()) throw ConfigError("no features declared");
  return FeatureSpec(std::move(defs));
}

FeatureSpec FeatureSpec::ids_only(int catalog_size, int emb_width) {
  return FeatureSpec({{"item_id", catalog_size, emb_width, false}});
}

int FeatureSpec::offset(const std::string& name) const {
  for (std::size_t i = 0; i < defs_.size(); ++i) {
    if (defs_[i].name == name) return offsets_[i];
  }
  throw ConfigError("feature not in spec: " + name);
}

const FeatureDef& FeatureSpec::def(const std::string& name) const {
  for (const FeatureDef& d : defs_) {
    if (d.name == name) return d;
  }
  throw ConfigError("feature not in spec: " + name);
}

bool FeatureSpec::has(const std::string& name) const {
  return std::any_of(defs_.begin(), defs_.end(), [&](const FeatureDef& d) { return d.name == name; });
}

TargetVocab::TargetVocab(const data::Catalog& catalog, data::EntityType entity) {
  const auto ids = catalog.ids_of(entity);
  ids_.assign(ids.begin(), ids.end());
  std::sort(ids_.begin(), ids_.end());
  index_.assign(static_cast<std::size_t>(catalog.size()), -1);
  for (std::size_t i = 0; i < ids_.size(); ++i) index_[static_cast<std::size_t>(ids_[i])] = static_cast<int>(i);
}

TargetVocab::TargetVocab(std::vector<int> ids, int catalog_size) : ids_(std::move(ids)) {
  index_.assign(static_cast<std::size_t>(catalog_size), -1);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const int id = ids_[i];
    if (id < 0 || id >= catalog_size) throw DataError("target vocab id outside catalog");
    index_[static_cast<std::size_t>(id)] = static_cast<int>(i);
  }
}

}  // namespace afra::model
