#pragma once

#include "afra/data/dataset.hpp"

namespace afra::data {

// Time-based partition: interactions with day < split_day train, the rest
// are test-day targets served with the user's pre-split history as input.
struct SplitResult {
  std::vector<Interaction> train;
  std::vector<Interaction> test;
  int split_day = 0;
};

SplitResult time_split(const Dataset& dataset, int split_day);

}  // namespace afra::data
