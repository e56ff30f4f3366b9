#pragma once

#include <string>

#include "afra/data/dataset.hpp"

namespace afra::data {

// Dataset directory layout: catalog.jsonl, interactions.jsonl,
// contexts.jsonl, featurespec.json. One JSON object per line, integer ids.
void save_dataset(const Dataset& dataset, const std::string& dir);
Dataset load_dataset(const std::string& dir);

}  // namespace afra::data
