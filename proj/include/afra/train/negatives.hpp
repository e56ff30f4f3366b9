#pragma once

#include <vector>

#include "afra/rng.hpp"

namespace afra::train {

// n distinct ids drawn uniformly from [0, vocab) excluding `positive`.
std::vector<int> sample_negatives(int vocab, int positive, int n, Rng& rng);

}  // namespace afra::train
