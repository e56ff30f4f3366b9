#include "afra/train/negatives.hpp"

#include <algorithm>
#include <unordered_set>

#include "afra/error.hpp"

namespace afra::train {

std::vector<int> sample_negatives(int vocab, int positive, int n, Rng& rng) {
  if (n < 1) throw ConfigError("sample_negatives: n must be >= 1");
  if (positive < 0 || positive >= vocab) throw ConfigError("sample_negatives: positive outside vocab");
  if (n >= vocab) {
    throw ConfigError("sample_negatives: n=" + std::to_string(n) + " too large for vocab " +
                      std::to_string(vocab));
  }
  // Floyd over the vocab minus the positive; indices >= positive shift by 1.
  const int m = vocab - 1;
  std::unordered_set<int> chosen;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = m - n; j < m; ++j) {
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j + 1)));
    const int pick = chosen.insert(t).second ? t : (chosen.insert(j), j);
    out.push_back(pick >= positive ? pick + 1 : pick);
  }
  return out;
}

}  // namespace afra::train
