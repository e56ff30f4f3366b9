#include "afra/data/split.hpp"

namespace afra::data {

SplitResult time_split(const Dataset& dataset, int split_day) {
  if (split_day <= 0 || split_day >= dataset.horizon_days) {
    throw ConfigError("time_split: split_day " + std::to_string(split_day) +
                      " outside (0," + std::to_string(dataset.horizon_days) + ")");
  }
  SplitResult out;
  out.split_day = split_day;
  for (const Interaction& in : dataset.interactions) {
    (in.day < split_day ? out.train : out.test).push_back(in);
  }
  return out;
}

}  // namespace afra::data
