#pragma once

#include <memory>
#include <string>

#include "afra/model/model.hpp"

namespace afra::rank {

// rt serves with everything known; batch hides the serving day's actions.
enum class ServingMode { rt, batch };
std::string mode_name(ServingMode m);
ServingMode mode_from_name(const std::string& s);

enum class RerankKind { none, decay, age_feature };
std::string rerank_name(RerankKind k);
RerankKind rerank_from_name(const std::string& s);

struct RerankPolicy {
  RerankKind kind = RerankKind::none;
  double half_life_days = 21.0;
};

struct RecItem {
  int id = -1;
  double score = 0.0;
  int age_days = 0;
  int creator = -1;
};

// Scores non-increasing, ids unique, every item available and of the
// recommended entity type.
struct RecommendationList {
  std::vector<RecItem> items;
  int size() const { return static_cast<int>(items.size()); }
};

struct Query {
  int user = -1;
  data::Context context;
  std::span<const data::Interaction> history;   // before the serving day
  std::span<const data::Interaction> same_day;  // serving-day actions so far
  int serving_day = 0;
};

class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual RecommendationList recommend(const Query& q, int k) const = 0;
  virtual std::string name() const = 0;
};

// Top-k of the available target items by score, ties broken by ascending id;
// ages and creators attached for the metrics.
RecommendationList topk_available(std::span<const double> scores,
                                  const model::TargetVocab& tvocab,
                                  const data::Catalog& catalog, int serving_day, int k);

// score' = score * 0.5^(age / half_life), then re-sorted. Scores must be
// positive (softmax probabilities), ages nonnegative.
RecommendationList age_decay_rerank(const RecommendationList& list, double half_life_days);

// Model-backed ranker applying the serving-mode input policy and an optional
// freshness re-rank.
class AfraRanker : public Ranker {
 public:
  AfraRanker(const model::AfraModel& m, ServingMode mode, RerankPolicy policy = {});
  RecommendationList recommend(const Query& q, int k) const override;
  std::string name() const override;

 private:
  const model::AfraModel* model_;
  ServingMode mode_;
  RerankPolicy policy_;
};

RecommendationList recommend(const model::AfraModel& m, const Query& q, ServingMode mode,
                             int k, const RerankPolicy& policy = {});

}  // namespace afra::rank
