#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "afra/error.hpp"

namespace afra::data {

enum class EntityType { article, outfit, influencer };
enum class ActionType { click, wishlist, add_to_cart, purchase };

constexpr int kSecondsPerDay = 86400;
constexpr int kNumActionTypes = 4;

std::string entity_name(EntityType e);
EntityType entity_from_name(const std::string& s);
std::string action_name(ActionType a);
ActionType action_from_name(const std::string& s);

struct Item {
  int id = -1;
  EntityType entity = EntityType::article;
  std::map<std::string, int> features;  // feature name -> category id
  std::vector<int> members;             // outfits: member article ids
  int creator = -1;                     // outfits: influencer index
  int created_day = 0;
  bool available = true;
};

struct Interaction {
  int user = -1;
  int item = -1;
  ActionType action = ActionType::click;
  std::int64_t timestamp = 0;
  int day = 0;  // floor(timestamp / 86400)
};

struct Context {
  int market = 0;
  int device = 0;
  int premise = 0;
  int language = 0;
  int country = 0;
};

struct UserSequence {
  int user = -1;
  Context context;
  std::vector<Interaction> interactions;  // chronological
};

// Registered feature names in canonical encoding order.
const std::vector<std::string>& feature_registry();

// Ordered feature name -> vocabulary size map (the featurespec.json content).
struct FeatureVocabs {
  std::vector<std::pair<std::string, int>> entries;

  int vocab(const std::string& name) const;
  bool has(const std::string& name) const;
  void validate() const;  // names must come from the registry
};

// Context field vocabulary sizes, alphabetical field order.
struct ContextVocabs {
  int country = 1;
  int device = 1;
  int language = 1;
  int market = 1;
  int premise = 1;
};

}  // namespace afra::data
