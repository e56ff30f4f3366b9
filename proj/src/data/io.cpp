#include "afra/data/io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace afra::data {

namespace {

using nlohmann::json;

json item_to_json(const Item& it) {
  json j;
  j["id"] = it.id;
  j["entity"] = entity_name(it.entity);
  j["features"] = json::object();
  for (const auto& [name, value] : it.features) j["features"][name] = value;
  if (it.entity == EntityType::outfit) {
    j["members"] = it.members;
    j["creator"] = it.creator;
  }
  j["created_day"] = it.created_day;
  j["available"] = it.available;
  return j;
}

Item item_from_json(const json& j, const FeatureVocabs& vocabs) {
  Item it;
  it.id = j.at("id").get<int>();
  it.entity = entity_from_name(j.at("entity").get<std::string>());
  for (const auto& [name, value] : j.at("features").items()) {
    if (!vocabs.has(name)) throw DataError("unknown feature name: " + name);
    const int v = value.get<int>();
    if (v < 0 || v >= vocabs.vocab(name)) {
      throw DataError("feature " + name + " value " + std::to_string(v) + " outside vocab");
    }
    it.features[name] = v;
  }
  if (j.contains("members")) it.members = j.at("members").get<std::vector<int>>();
  if (j.contains("creator")) it.creator = j.at("creator").get<int>();
  it.created_day = j.at("created_day").get<int>();
  it.available = j.at("available").get<bool>();
  return it;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for reading: " + path);
  return f;
}

json parse_line(const std::string& line, const std::string& file, std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(file + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    auto f = open_out(dir + "/featurespec.json");
    json j = json::object();
    for (const auto& [name, vocab] : dataset.feature_vocabs.entries) j[name] = vocab;
    json root;
    root["features"] = j;
    root["context"] = {{"country", dataset.context_vocabs.country},
                       {"device", dataset.context_vocabs.device},
                       {"language", dataset.context_vocabs.language},
                       {"market", dataset.context_vocabs.market},
                       {"premise", dataset.context_vocabs.premise}};
    root["horizon_days"] = dataset.horizon_days;
    root["users"] = dataset.n_users;
    f << root.dump(2) << '\n';
  }
  {
    auto f = open_out(dir + "/catalog.jsonl");
    for (const Item& it : dataset.catalog.items()) f << item_to_json(it).dump() << '\n';
  }
  {
    auto f = open_out(dir + "/contexts.jsonl");
    for (int u = 0; u < dataset.n_users; ++u) {
      const Context& c = dataset.contexts[static_cast<std::size_t>(u)];
      json j;
      j["user"] = u;
      j["market"] = c.market;
      j["device"] = c.device;
      j["premise"] = c.premise;
      j["language"] = c.language;
      j["country"] = c.country;
      f << j.dump() << '\n';
    }
  }
  {
    auto f = open_out(dir + "/interactions.jsonl");
    for (const Interaction& in : dataset.interactions) {
      json j;
      j["user"] = in.user;
      j["item"] = in.item;
      j["action"] = action_name(in.action);
      j["timestamp"] = in.timestamp;
      j["day"] = in.day;
      f << j.dump() << '\n';
    }
  }
}

Dataset load_dataset(const std::string& dir) {
  Dataset ds;
  {
    auto f = open_in(dir + "/featurespec.json");
    json root;
    try {
      root = json::parse(f);
    } catch (const json::exception& e) {
      throw ParseError(dir + "/featurespec.json: " + e.what());
    }
    // Canonical feature order, not file order.
    const json& feats = root.at("features");
    for (const std::string& name : feature_registry()) {
      if (feats.contains(name)) ds.feature_vocabs.entries.emplace_back(name, feats.at(name).get<int>());
    }
    for (const auto& [name, v] : feats.items()) {
      if (!ds.feature_vocabs.has(name)) throw DataError("unknown feature name: " + name);
      (void)v;
    }
    const json& ctx = root.at("context");
    ds.context_vocabs.country = ctx.at("country").get<int>();
    ds.context_vocabs.device = ctx.at("device").get<int>();
    ds.context_vocabs.language = ctx.at("language").get<int>();
    ds.context_vocabs.market = ctx.at("market").get<int>();
    ds.context_vocabs.premise = ctx.at("premise").get<int>();
    ds.horizon_days = root.at("horizon_days").get<int>();
    ds.n_users = root.at("users").get<int>();
  }
  {
    auto f = open_in(dir + "/catalog.jsonl");
    std::vector<Item> items;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty()) continue;
      items.push_back(item_from_json(parse_line(line, dir + "/catalog.jsonl", lineno), ds.feature_vocabs));
    }
    ds.catalog = Catalog(std::move(items));
  }
  {
    auto f = open_in(dir + "/contexts.jsonl");
    ds.contexts.assign(static_cast<std::size_t>(ds.n_users), Context{});
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = parse_line(line, dir + "/contexts.jsonl", lineno);
      const int u = j.at("user").get<int>();
      if (u < 0 || u >= ds.n_users) {
        throw ParseError(dir + "/contexts.jsonl:" + std::to_string(lineno) + ": user out of range");
      }
      Context& c = ds.contexts[static_cast<std::size_t>(u)];
      c.market = j.at("market").get<int>();
      c.device = j.at("device").get<int>();
      c.premise = j.at("premise").get<int>();
      c.language = j.at("language").get<int>();
      c.country = j.at("country").get<int>();
    }
  }
  {
    auto f = open_in(dir + "/interactions.jsonl");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = parse_line(line, dir + "/interactions.jsonl", lineno);
      Interaction in;
      try {
        in.user = j.at("user").get<int>();
        in.item = j.at("item").get<int>();
        in.action = action_from_name(j.at("action").get<std::string>());
        in.timestamp = j.at("timestamp").get<std::int64_t>();
        in.day = j.at("day").get<int>();
      } catch (const json::exception& e) {
        throw ParseError(dir + "/interactions.jsonl:" + std::to_string(lineno) + ": " + e.what());
      }
      ds.interactions.push_back(in);
    }
  }
  ds.validate();
  return ds;
}

}  // namespace afra::data
