#include "afra/data/dataset.hpp"

#include <algorithm>
#include <map>

namespace afra::data {

std::string entity_name(EntityType e) {
  switch (e) {
    case EntityType::article: return "article";
    case EntityType::outfit: return "outfit";
    case EntityType::influencer: return "influencer";
  }
  throw DataError("bad entity enum");
}

EntityType entity_from_name(const std::string& s) {
  if (s == "article") return EntityType::article;
  if (s == "outfit") return EntityType::outfit;
  if (s == "influencer") return EntityType::influencer;
  throw ParseError("unknown entity type: " + s);
}

std::string action_name(ActionType a) {
  switch (a) {
    case ActionType::click: return "click";
    case ActionType::wishlist: return "wishlist";
    case ActionType::add_to_cart: return "add-to-cart";
    case ActionType::purchase: return "purchase";
  }
  throw DataError("bad action enum");
}

ActionType action_from_name(const std::string& s) {
  if (s == "click") return ActionType::click;
  if (s == "wishlist") return ActionType::wishlist;
  if (s == "add-to-cart") return ActionType::add_to_cart;
  if (s == "purchase") return ActionType::purchase;
  throw ParseError("unknown action type: " + s);
}

const std::vector<std::string>& feature_registry() {
  static const std::vector<std::string> names = {
      "brand", "color", "category", "material", "fit",
      "pattern", "influencer", "style", "price_bucket"};
  return names;
}

int FeatureVocabs::vocab(const std::string& name) const {
  for (const auto& [n, v] : entries) {
    if (n == name) return v;
  }
  throw DataError("feature not declared: " + name);
}

bool FeatureVocabs::has(const std::string& name) const {
  for (const auto& [n, v] : entries) {
    if (n == name) return true;
  }
  return false;
}

void FeatureVocabs::validate() const {
  const auto& reg = feature_registry();
  for (const auto& [name, vocab] : entries) {
    if (std::find(reg.begin(), reg.end(), name) == reg.end()) {
      throw DataError("unknown feature name: " + name);
    }
    if (vocab <= 0) throw DataError("feature " + name + " has non-positive vocab");
  }
}

Catalog::Catalog(std::vector<Item> items) : items_(std::move(items)) {
  int max_creator = -1;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].id != static_cast<int>(i)) {
      throw DataError("catalog items must be contiguous by id");
    }
    switch (items_[i].entity) {
      case EntityType::article: articles_.push_back(items_[i].id); break;
      case EntityType::outfit: outfits_.push_back(items_[i].id); break;
      case EntityType::influencer: influencers_.push_back(items_[i].id); break;
    }
    if (items_[i].entity == EntityType::outfit) max_creator = std::max(max_creator, items_[i].creator);
  }
  by_creator_.resize(static_cast<std::size_t>(max_creator + 1));
  for (int id : outfits_) {
    const int c = items_[static_cast<std::size_t>(id)].creator;
    if (c >= 0) by_creator_[static_cast<std::size_t>(c)].push_back(id);
  }
}

const Item& Catalog::item(int id) const {
  if (!has(id)) throw IndexError("unknown item id: " + std::to_string(id));
  return items_[static_cast<std::size_t>(id)];
}

std::span<const int> Catalog::ids_of(EntityType e) const {
  switch (e) {
    case EntityType::article: return articles_;
    case EntityType::outfit: return outfits_;
    case EntityType::influencer: return influencers_;
  }
  throw DataError("bad entity enum");
}

std::span<const int> Catalog::outfits_of_creator(int creator) const {
  if (creator < 0 || static_cast<std::size_t>(creator) >= by_creator_.size()) {
    static const std::vector<int> empty;
    return empty;
  }
  return by_creator_[static_cast<std::size_t>(creator)];
}

void Catalog::validate() const {
  for (const Item& it : items_) {
    if (it.entity == EntityType::outfit && it.members.empty()) {
      throw DataError("outfit " + std::to_string(it.id) + " has no member articles");
    }
    for (int m : it.members) {
      if (!has(m) || items_[static_cast<std::size_t>(m)].entity != EntityType::article) {
        throw DataError("outfit " + std::to_string(it.id) + " references non-article member " + std::to_string(m));
      }
    }
  }
}

void Dataset::validate() const {
  catalog.validate();
  feature_vocabs.validate();
  if (static_cast<int>(contexts.size()) != n_users) throw DataError("context count != user count");
  for (const Interaction& in : interactions) {
    if (in.user < 0 || in.user >= n_users) throw DataError("interaction references unknown user");
    if (!catalog.has(in.item)) throw DataError("interaction references unknown item");
    if (in.day != static_cast<int>(in.timestamp / kSecondsPerDay)) {
      throw DataError("interaction day inconsistent with timestamp");
    }
    if (in.day < 0 || in.day >= horizon_days) throw DataError("interaction outside horizon");
  }
}

std::vector<UserSequence> build_sequences(std::span<const Interaction> interactions,
                                          std::span<const Context> contexts,
                                          const Catalog& catalog, int max_len,
                                          EntityType target_entity,
                                          bool target_entity_only) {
  if (max_len < 1) throw ConfigError("build_sequences: max_len must be >= 1");
  std::map<int, std::vector<Interaction>> per_user;
  for (const Interaction& in : interactions) {
    if (target_entity_only && catalog.item(in.item).entity != target_entity) continue;
    per_user[in.user].push_back(in);
  }
  std::vector<UserSequence> out;
  out.reserve(per_user.size());
  for (auto& [user, list] : per_user) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Interaction& a, const Interaction& b) { return a.timestamp < b.timestamp; });
    const bool has_target = std::any_of(list.begin(), list.end(), [&](const Interaction& in) {
      return catalog.item(in.item).entity == target_entity;
    });
    if (!has_target) continue;
    UserSequence seq;
    seq.user = user;
    if (user >= 0 && static_cast<std::size_t>(user) < contexts.size()) {
      seq.context = contexts[static_cast<std::size_t>(user)];
    }
    if (static_cast<int>(list.size()) > max_len) {
      seq.interactions.assign(list.end() - max_len, list.end());
    } else {
      seq.interactions = std::move(list);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace afra::data
