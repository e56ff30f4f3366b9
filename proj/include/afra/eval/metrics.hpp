#pragma once

#include <span>

#include "afra/rank/reranker.hpp"

namespace afra::eval {

// Binary-relevance metrics over the top-k of a deduplicated list. Targets
// must be nonempty.
double recall_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k);
double precision_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k);
double hitrate_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k);
// log2 discount, binary gains.
double ndcg_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k);
double map_at_k(const rank::RecommendationList& list, std::span<const int> targets, int k);

// Mean age in days over the top min(k, size) items.
double freshness_at_k(const rank::RecommendationList& list, int k);

// Longest run of consecutive same-creator items in the top-k; lower is
// more diverse.
int inter_list_diversity(const rank::RecommendationList& list, int k);

// 1 - |topk(a) n topk(b)| / k; the non-overlap between consecutive visits.
double temporal_diversity(const rank::RecommendationList& a, const rank::RecommendationList& b, int k);

}  // namespace afra::eval
