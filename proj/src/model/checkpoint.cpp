#include "afra/model/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

namespace afra::model {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'A', 'F', 'R', 'A', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& f, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  f.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ofstream& f, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  f.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::ifstream& f) {
  unsigned char b[4];
  f.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::ifstream& f) {
  unsigned char b[8];
  f.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

json model_config_to_json(const ModelConfig& cfg) {
  json j;
  j["encoder"] = {{"n_layers", cfg.encoder.n_layers}, {"n_heads", cfg.encoder.n_heads},
                  {"d_model", cfg.encoder.d_model},   {"d_ff", cfg.encoder.d_ff},
                  {"dropout_rate", cfg.encoder.dropout_rate},
                  {"max_positions", cfg.encoder.max_positions}};
  j["feature_emb_width"] = cfg.feature_emb_width;
  j["session_emb_width"] = cfg.session_emb_width;
  j["age_emb_width"] = cfg.age_emb_width;
  j["id_emb_width"] = cfg.id_emb_width;
  j["max_len"] = cfg.max_len;
  j["recency_clip_days"] = cfg.recency_clip_days;
  j["use_positional"] = cfg.use_positional;
  j["ids_only"] = cfg.ids_only;
  j["use_age_feature"] = cfg.use_age_feature;
  j["target_entity"] = data::entity_name(cfg.target_entity);
  j["init_std"] = cfg.init_std;
  return j;
}

ModelConfig model_config_from_json(const json& j) {
  ModelConfig cfg;
  const json& e = j.at("encoder");
  cfg.encoder.n_layers = e.at("n_layers").get<int>();
  cfg.encoder.n_heads = e.at("n_heads").get<int>();
  cfg.encoder.d_model = e.at("d_model").get<int>();
  cfg.encoder.d_ff = e.at("d_ff").get<int>();
  cfg.encoder.dropout_rate = e.at("dropout_rate").get<double>();
  cfg.encoder.max_positions = e.at("max_positions").get<int>();
  cfg.feature_emb_width = j.at("feature_emb_width").get<int>();
  cfg.session_emb_width = j.at("session_emb_width").get<int>();
  cfg.age_emb_width = j.at("age_emb_width").get<int>();
  cfg.id_emb_width = j.at("id_emb_width").get<int>();
  cfg.max_len = j.at("max_len").get<int>();
  cfg.recency_clip_days = j.at("recency_clip_days").get<int>();
  cfg.use_positional = j.at("use_positional").get<bool>();
  cfg.ids_only = j.at("ids_only").get<bool>();
  cfg.use_age_feature = j.at("use_age_feature").get<bool>();
  cfg.target_entity = data::entity_from_name(j.at("target_entity").get<std::string>());
  cfg.init_std = j.at("init_std").get<double>();
  return cfg;
}

void save_checkpoint(const AfraModel& m, const std::string& path) {
  json header;
  header["model"] = model_config_to_json(m.config());
  json vocabs = json::array();
  for (const auto& [name, vocab] : m.feature_vocabs().entries) {
    vocabs.push_back({name, vocab});
  }
  header["feature_vocabs"] = vocabs;
  const data::ContextVocabs& cv = m.context_vocabs();
  header["context_vocabs"] = {{"country", cv.country}, {"device", cv.device},
                              {"language", cv.language}, {"market", cv.market},
                              {"premise", cv.premise}};
  header["catalog_size"] = m.embedder().catalog_size();
  header["target_vocab"] = std::vector<int>(m.target_vocab().ids().begin(), m.target_vocab().ids().end());
  header["params"] = json::array();
  for (const auto& p : m.params().items()) {
    header["params"].push_back({{"name", p.name}, {"shape", p.tensor.shape()}});
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint for writing: " + path);
  f.write(kMagic, 8);
  write_u32(f, kVersion);
  const std::string head = header.dump();
  write_u64(f, head.size());
  f.write(head.data(), static_cast<std::streamsize>(head.size()));
  std::vector<unsigned char> buf;
  for (const auto& p : m.params().items()) {
    buf.resize(p.tensor.numel() * 4);
    const auto vals = p.tensor.data();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(vals[i]));
      for (int k = 0; k < 4; ++k) buf[i * 4 + static_cast<std::size_t>(k)] =
          static_cast<unsigned char>((bits >> (8 * k)) & 0xFF);
    }
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  if (!f) throw DataError("checkpoint write failed: " + path);
}

AfraModel load_checkpoint(const std::string& path, const data::Catalog& catalog) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0) throw ParseError(path + ": not a checkpoint file");
  const std::uint32_t version = read_u32(f);
  if (version != kVersion) throw ParseError(path + ": unsupported checkpoint version");
  const std::uint64_t head_len = read_u64(f);
  std::string head(head_len, '\0');
  f.read(head.data(), static_cast<std::streamsize>(head_len));
  if (!f) throw ParseError(path + ": truncated header");
  json header;
  try {
    header = json::parse(head);
  } catch (const json::exception& e) {
    throw ParseError(path + ": bad header: " + e.what());
  }

  const ModelConfig cfg = model_config_from_json(header.at("model"));
  const json& vj = header.at("feature_vocabs");
  data::FeatureVocabs vocabs;
  for (const auto& entry : vj) {
    vocabs.entries.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<int>());
  }
  data::ContextVocabs cv;
  const json& cj = header.at("context_vocabs");
  cv.country = cj.at("country").get<int>();
  cv.device = cj.at("device").get<int>();
  cv.language = cj.at("language").get<int>();
  cv.market = cj.at("market").get<int>();
  cv.premise = cj.at("premise").get<int>();
  const int catalog_size = header.at("catalog_size").get<int>();
  if (catalog_size != catalog.size()) {
    throw DataError(path + ": checkpoint was built for a catalog of " + std::to_string(catalog_size) +
                    " items, got " + std::to_string(catalog.size()));
  }

  AfraModel m = AfraModel::create(cfg, catalog, vocabs, cv, 0);
  const auto stored_vocab = header.at("target_vocab").get<std::vector<int>>();
  const auto live_vocab = m.target_vocab().ids();
  if (stored_vocab.size() != live_vocab.size() ||
      !std::equal(stored_vocab.begin(), stored_vocab.end(), live_vocab.begin())) {
    throw DataError(path + ": target vocabulary does not match the catalog");
  }
  auto& items = m.params().items();
  const json& manifest = header.at("params");
  if (manifest.size() != items.size()) throw ParseError(path + ": parameter manifest mismatch");
  std::vector<unsigned char> buf;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string name = manifest[i].at("name").get<std::string>();
    const auto shape = manifest[i].at("shape").get<std::vector<int>>();
    if (name != items[i].name || shape != items[i].tensor.shape()) {
      throw ParseError(path + ": parameter " + name + " does not match model layout");
    }
    auto vals = items[i].tensor.data();
    buf.resize(vals.size() * 4);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!f) throw ParseError(path + ": truncated parameter data");
    for (std::size_t k = 0; k < vals.size(); ++k) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(buf[k * 4 + static_cast<std::size_t>(b)]) << (8 * b);
      vals[k] = static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  return m;
}

}  // namespace afra::model
