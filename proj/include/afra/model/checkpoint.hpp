#pragma once

#include <json.hpp>

#include "afra/model/model.hpp"

namespace afra::model {

// Checkpoint layout: 8-byte magic, u32 version, u64 header length, JSON
// header (configs, feature vocabularies, target vocabulary, array manifest),
// then raw little-endian fp32 arrays in manifest order.
void save_checkpoint(const AfraModel& m, const std::string& path);
AfraModel load_checkpoint(const std::string& path, const data::Catalog& catalog);

nlohmann::json model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j);

}  // namespace afra::model
