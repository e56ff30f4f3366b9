#include "afra/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace afra::eval {

namespace {

void check(const rank::RecommendationList& list, std::span<const int> targets, int k) {
  if (k < 1) throw ConfigError("metric: k must be >= 1");
  if (targets.empty()) throw DataError("metric: empty target set");
  (void)list;
}

int top_limit(const rank::RecommendationList& list, int k) {
  return std::min(k, list.size());
}

}  // namespace

double recall_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k) {
  check(list, targets, k);
  const std::set<int> t(targets.begin(), targets.end());
  int hits = 0;
  for (int i = 0; i < top_limit(list, k); ++i) hits += t.count(list.items[static_cast<std::size_t>(i)].id);
  return static_cast<double>(hits) / static_cast<double>(t.size());
}

double precision_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k) {
  check(list, targets, k);
  const std::set<int> t(targets.begin(), targets.end());
  int hits = 0;
  for (int i = 0; i < top_limit(list, k); ++i) hits += t.count(list.items[static_cast<std::size_t>(i)].id);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double hitrate_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k) {
  check(list, targets, k);
  const std::set<int> t(targets.begin(), targets.end());
  for (int i = 0; i < top_limit(list, k); ++i) {
    if (t.count(list.items[static_cast<std::size_t>(i)].id)) return 1.0;
  }
  return 0.0;
}

double ndcg_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k) {
  check(list, targets, k);
  const std::set<int> t(targets.begin(), targets.end());
  double dcg = 0.0;
  for (int i = 0; i < top_limit(list, k); ++i) {
    if (t.count(list.items[static_cast<std::size_t>(i)].id)) {
      dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
  }
  double ideal = 0.0;
  const int ideal_hits = std::min<int>(k, static_cast<int>(t.size()));
  for (int i = 0; i < ideal_hits; ++i) ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / ideal;
}

double map_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k) {
  check(list, targets, k);
  const std::set<int> t(targets.begin(), targets.end());
  double ap = 0.0;
  int hits = 0;
  for (int i = 0; i < top_limit(list, k); ++i) {
    if (t.count(list.items[static_cast<std::size_t>(i)].id)) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  const int denom = std::min<int>(k, static_cast<int>(t.size()));
  return ap / static_cast<double>(denom);
}

double freshness_at_k(const rank::RecommendationList& list, int k) {
  if (k < 1) throw ConfigError("metric: k must be >= 1");
  const int n = top_limit(list, k);
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(list.items[static_cast<std::size_t>(i)].age_days);
  return sum / static_cast<double>(n);
}

int inter_list_diversity(const rank::RecommendationList& list, int k) {
  if (k < 1) throw ConfigError("metric: k must be >= 1");
  const int n = top_limit(list, k);
  int best = 0;
  int run = 0;
  int prev = INT_MIN;
  for (int i = 0; i < n; ++i) {
    const int c = list.items[static_cast<std::size_t>(i)].creator;
    run = (i > 0 && c == prev) ? run + 1 : 1;
    best = std::max(best, run);
    prev = c;
  }
  return best;
}

double temporal_diversity(const rank::RecommendationList& a, const rank::RecommendationList& b, int k) {
  if (k < 1) throw ConfigError("metric: k must be >= 1");
  if (a.size() == 0 || b.size() == 0) throw DataError("temporal diversity: empty list");
  std::set<int> sa;
  for (int i = 0; i < top_limit(a, k); ++i) sa.insert(a.items[static_cast<std::size_t>(i)].id);
  int overlap = 0;
  for (int i = 0; i < top_limit(b, k); ++i) overlap += sa.count(b.items[static_cast<std::size_t>(i)].id);
  return 1.0 - static_cast<double>(overlap) / static_cast<double>(k);
}

}  // namespace afra::eval
