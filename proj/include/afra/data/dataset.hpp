#pragma once

#include <span>
#include <vector>

#include "afra/data/types.hpp"

namespace afra::data {

// Items indexed by contiguous id: articles first, then outfits, then
// influencer entities.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<Item> items);

  const Item& item(int id) const;
  bool has(int id) const { return id >= 0 && static_cast<std::size_t>(id) < items_.size(); }
  int size() const { return static_cast<int>(items_.size()); }
  const std::vector<Item>& items() const { return items_; }

  bool is_entity(int id, EntityType e) const { return item(id).entity == e; }
  std::span<const int> ids_of(EntityType e) const;
  int count_of(EntityType e) const { return static_cast<int>(ids_of(e).size()); }

  // Outfit ids created by the given influencer index.
  std::span<const int> outfits_of_creator(int creator) const;
  int n_creators() const { return static_cast<int>(by_creator_.size()); }

  void validate() const;

 private:
  std::vector<Item> items_;
  std::vector<int> articles_, outfits_, influencers_;
  std::vector<std::vector<int>> by_creator_;
};

struct Dataset {
  Catalog catalog;
  FeatureVocabs feature_vocabs;
  ContextVocabs context_vocabs;
  std::vector<Context> contexts;        // indexed by user id
  std::vector<Interaction> interactions;  // sorted by (user, timestamp)
  int horizon_days = 0;
  int n_users = 0;

  void validate() const;
};

// Per-user chronological sequences. Keeps the max_len most recent
// interactions and drops users without any interaction on the target entity.
std::vector<UserSequence> build_sequences(std::span<const Interaction> interactions,
                                          std::span<const Context> contexts,
                                          const Catalog& catalog, int max_len,
                                          EntityType target_entity = EntityType::outfit,
                                          bool target_entity_only = false);

}  // namespace afra::data
